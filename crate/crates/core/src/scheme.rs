//! The five-class association scheme of a balanced weighing matrix, in both
//! directions, and its three-class quotient.
//!
//! For a `BW(v, k, λ)` `W = W_1 - W_2` the vertex set is two copies of
//! `{0,1} × {0..v}`; with `P` the 2×2 swap:
//!
//! ```text
//! A_1 = diag(P⊗I, P⊗I)                 A_2 = diag(J⊗(J-I), J⊗(J-I))
//! A_3 = [[0, I⊗W_1 + P⊗W_2], [.^T, 0]]  A_4 = [[0, I⊗W_2 + P⊗W_1], [.^T, 0]]
//! A_5 = [[0, J⊗(J - W_1 - W_2)], [.^T, 0]]
//! ```
//!
//! Everything is exact except [`spectrum`], which checks the closed-form
//! eigenmatrices in floating point against a relative tolerance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{matmul, matmul_transposed, IntMatrix, SignedMatrix};
use crate::groupmat::{group_from_signed, verify_bgw};
use crate::report::Report;

/// Relative tolerance of the floating-point spectrum checks.
pub const SPECTRUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationScheme {
    classes: Vec<SignedMatrix>,
}

impl AssociationScheme {
    /// Wraps adjacency matrices `A_0..A_d`; only shapes are checked here.
    pub fn new(classes: Vec<SignedMatrix>) -> Result<Self> {
        let order = classes.first().map_or(0, |a| a.rows());
        if classes.is_empty() || classes.iter().any(|a| a.shape() != (order, order)) {
            return Err(Error::InvalidParameter(
                "classes must be nonempty and square of one common order".into(),
            ));
        }
        Ok(AssociationScheme { classes })
    }

    /// `|X|`.
    pub fn order(&self) -> usize {
        self.classes[0].rows()
    }

    /// Number of non-identity classes.
    pub fn d(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn class(&self, i: usize) -> &SignedMatrix {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[SignedMatrix] {
        &self.classes
    }

    pub fn valencies(&self) -> Vec<usize> {
        self.classes
            .iter()
            .map(|a| a.row_weights().first().copied().unwrap_or(0))
            .collect()
    }

    /// Class index of every cell, `None` if some cell is in zero or several classes.
    fn class_map(&self) -> Option<Vec<u8>> {
        let n = self.order();
        let mut map = vec![u8::MAX; n * n];
        for (i, a) in self.classes.iter().enumerate() {
            for (cell, &x) in map.iter_mut().zip(a.as_slice()) {
                if x != 0 {
                    if *cell != u8::MAX {
                        return None;
                    }
                    *cell = i as u8;
                }
            }
        }
        map.iter().all(|&c| c != u8::MAX).then_some(map)
    }

    fn permuted(&self, class_order: &[usize], vertex_order: &[usize]) -> Result<Self> {
        let classes = class_order
            .iter()
            .map(|&c| self.classes[c].permuted(vertex_order, vertex_order))
            .collect::<Result<Vec<_>>>()?;
        Ok(AssociationScheme { classes })
    }
}

/// Vertex `(side, half, point)` is `side * 2v + half * v + point`.
fn class_of(w: &SignedMatrix, v: usize, x: usize, y: usize) -> usize {
    let (sx, hx, px) = (x / (2 * v), (x / v) % 2, x % v);
    let (sy, hy, py) = (y / (2 * v), (y / v) % 2, y % v);
    if sx == sy {
        return if x == y {
            0
        } else if px == py {
            1
        } else {
            2
        };
    }
    let s = if sx == 0 {
        w.get(px, py)
    } else {
        w.get(py, px)
    };
    match (s, hx == hy) {
        (0, _) => 5,
        (1, true) | (-1, false) => 3,
        _ => 4,
    }
}

/// The six `4v × 4v` classes of a certified `BW(v, k, λ)`, `v > k`.
pub fn scheme_from_bw(
    w: &SignedMatrix,
    v: usize,
    k: u64,
    lambda: u64,
) -> Result<AssociationScheme> {
    if v as u64 == k {
        return Err(Error::InvalidParameter(
            "v = k gives an empty fifth class; Hadamard matrices are not handled".into(),
        ));
    }
    let cert = verify_bgw(&group_from_signed(w)?, v, k, lambda)?;
    if !cert.passed() {
        return Err(Error::CertificateFailed(cert.to_string()));
    }
    Ok(scheme_unchecked(w, v))
}

fn scheme_unchecked(w: &SignedMatrix, v: usize) -> AssociationScheme {
    let n = 4 * v;
    let mut data = vec![vec![0i8; n * n]; 6];
    for x in 0..n {
        for y in 0..n {
            data[class_of(w, v, x, y)][x * n + y] = 1;
        }
    }
    AssociationScheme {
        classes: data
            .into_iter()
            .map(|d| SignedMatrix::new(n, n, d).expect("square"))
            .collect(),
    }
}

/// Intersection numbers `p_ij^k`: `A_i A_j = Σ_k p_ij^k A_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionNumbers {
    pub p: Vec<Vec<Vec<i64>>>,
}

impl IntersectionNumbers {
    pub fn get(&self, i: usize, j: usize, k: usize) -> i64 {
        self.p[i][j][k]
    }

    /// `(B_j)[i][k] = p_ij^k`.
    pub fn b(&self, j: usize) -> Vec<Vec<i64>> {
        (0..self.p.len())
            .map(|i| (0..self.p.len()).map(|k| self.p[i][j][k]).collect())
            .collect()
    }
}

/// Checks the axioms and, when they hold, returns the structure constants.
fn analyze(s: &AssociationScheme) -> Result<(Report, Option<IntersectionNumbers>)> {
    let mut r = Report::new("association scheme axioms");
    let n = s.order();
    let classes = &s.classes;
    r.push("AS1 A_0 = I", classes[0] == SignedMatrix::identity(n));
    let binary = classes.iter().all(SignedMatrix::is_binary);
    let map = if binary { s.class_map() } else { None };
    r.push("AS2 sum A_i = J", map.is_some());
    let symmetric = classes.iter().all(|a| *a == a.transpose());
    r.push("AS3 A_i symmetric", symmetric);
    let (Some(map), true, true) = (map, symmetric, r.passed()) else {
        r.push("AS4 A_i A_j in span", false);
        return Ok((r, None));
    };

    let d1 = classes.len();
    let mut p = vec![vec![vec![0i64; d1]; d1]; d1];
    let mut closed = true;
    'products: for i in 0..d1 {
        for j in i..d1 {
            if i == 0 {
                p[0][j][j] = 1;
                p[j][0][j] = 1;
                continue;
            }
            // Symmetric classes: A_i A_j = A_i A_j^T.
            let prod = matmul_transposed(&classes[i], &classes[j])?;
            let mut value = vec![None; d1];
            for (&c, &x) in map.iter().zip(prod.as_slice()) {
                match value[c as usize] {
                    None => value[c as usize] = Some(x),
                    Some(v0) if v0 != x => {
                        closed = false;
                        break 'products;
                    }
                    _ => {}
                }
            }
            for k in 0..d1 {
                let x = value[k].unwrap_or(0);
                p[i][j][k] = x;
                p[j][i][k] = x;
            }
        }
    }
    r.push("AS4 A_i A_j in span", closed);
    Ok((r, closed.then_some(IntersectionNumbers { p })))
}

/// (AS1)-(AS4): `A_0 = I`, `Σ A_i = J`, symmetry, and closure of every product.
pub fn verify_axioms(s: &AssociationScheme) -> Result<Report> {
    Ok(analyze(s)?.0)
}

pub fn intersection_numbers(s: &AssociationScheme) -> Result<IntersectionNumbers> {
    match analyze(s)? {
        (_, Some(p)) => Ok(p),
        (r, None) => Err(Error::NotAScheme(
            r.failures()
                .map(|c| c.name.clone())
                .collect::<Vec<_>>()
                .join(", "),
        )),
    }
}

/// `c = (k-1)k / (2(v-1))`, the `A_2`-coefficient of `A_3^2`.
fn half_lambda(v: usize, k: u64) -> Result<i64> {
    let num = (k - 1) * k;
    let den = 2 * (v as u64 - 1);
    if !num.is_multiple_of(den) {
        return Err(Error::NotDivisible {
            what: "(k-1)k by 2(v-1)",
            divisor: den,
            value: num,
        });
    }
    Ok((num / den) as i64)
}

/// The exact relations among `A_0..A_5` that force `W` back out.
pub fn class_identities(s: &AssociationScheme, v: usize, k: u64) -> Result<Report> {
    if s.d() != 5 || s.order() != 4 * v {
        return Err(Error::InvalidParameter(format!(
            "expected 6 classes of order {}, got {} of order {}",
            4 * v,
            s.d() + 1,
            s.order()
        )));
    }
    let c = half_lambda(v, k)?;
    let k = k as i64;
    let a: Vec<IntMatrix> = s.classes.iter().map(SignedMatrix::widen).collect();
    let combo = |terms: &[(i64, usize)]| -> Result<IntMatrix> {
        let mut m = IntMatrix::zeros(s.order(), s.order());
        for &(coef, i) in terms {
            m = m.add(&a[i].scale(coef)?)?;
        }
        Ok(m)
    };
    let diff = s.classes[3].sub(&s.classes[4])?;
    let sum = s.classes[3].add(&s.classes[4])?;
    let (a1, a3, a4) = (&s.classes[1], &s.classes[3], &s.classes[4]);

    let mut r = Report::new("class identities");
    r.push(
        format!("A_3^2 = {k}A_0 + {c}A_2"),
        matmul(a3, a3)? == combo(&[(k, 0), (c, 2)])?,
    );
    let mixed = combo(&[(k, 1), (c, 2)])?;
    r.push(
        format!("A_3A_4 = A_4A_3 = {k}A_1 + {c}A_2"),
        matmul(a3, a4)? == mixed && matmul(a4, a3)? == mixed,
    );
    r.push(
        format!("(A_3-A_4)^2 = {}(A_0-A_1)", 2 * k),
        matmul(&diff, &diff)? == combo(&[(2 * k, 0), (-2 * k, 1)])?,
    );
    r.push(
        format!("(A_3+A_4)^2 = {}(A_0+A_1) + {}A_2", 2 * k, 4 * c),
        matmul(&sum, &sum)? == combo(&[(2 * k, 0), (2 * k, 1), (4 * c, 2)])?,
    );
    r.push("A_1A_3 = A_4", matmul(a1, a3)? == a[4]);
    Ok(r)
}

/// Closed-form first and second eigenmatrices for `(v, k)`.
pub fn eigenmatrices(v: usize, k: u64) -> ([[f64; 6]; 6], [[f64; 6]; 6]) {
    let (v, k) = (v as f64, k as f64);
    let sk = k.sqrt();
    let c = ((v - k) * k / (v - 1.0)).sqrt();
    let d = ((v - 1.0) * (v - k) / k).sqrt();
    let e = ((v - 1.0) * k / (v - k)).sqrt();
    let p = [
        [1.0, 1.0, 2.0 * (v - 1.0), k, k, 2.0 * (v - k)],
        [1.0, -1.0, 0.0, sk, -sk, 0.0],
        [1.0, -1.0, 0.0, -sk, sk, 0.0],
        [1.0, 1.0, 2.0 * (v - 1.0), -k, -k, -2.0 * (v - k)],
        [1.0, 1.0, -2.0, -c, -c, 2.0 * c],
        [1.0, 1.0, -2.0, c, c, -2.0 * c],
    ];
    let q = [
        [1.0, v, v, 1.0, v - 1.0, v - 1.0],
        [1.0, -v, -v, 1.0, v - 1.0, v - 1.0],
        [1.0, 0.0, 0.0, 1.0, -1.0, -1.0],
        [1.0, v / sk, -v / sk, -1.0, -d, d],
        [1.0, -v / sk, v / sk, -1.0, -d, d],
        [1.0, 0.0, 0.0, -1.0, e, -e],
    ];
    (p, q)
}

/// Square `f64` matrix with a fixed-order dot product.
#[derive(Clone)]
struct Dense {
    n: usize,
    data: Vec<f64>,
}

impl Dense {
    fn zeros(n: usize) -> Self {
        Dense {
            n,
            data: vec![0.0; n * n],
        }
    }

    fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    fn axpy(&mut self, alpha: f64, m: &SignedMatrix) {
        for (d, &x) in self.data.iter_mut().zip(m.as_slice()) {
            *d += alpha * f64::from(x);
        }
    }

    fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }
}

/// Four interleaved partial sums combined in a fixed order, so results are
/// reproducible regardless of how the compiler vectorizes.
fn dot4(a: &[f64], b: &[f64]) -> f64 {
    let mut s = [0.0f64; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..4 {
            s[l] += x[l] * y[l];
        }
    }
    let tail: f64 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
    (s[0] + s[1]) + (s[2] + s[3]) + tail
}

/// `max |A B^T - target|` where `target` is given entrywise.
fn residual_product(a: &Dense, b: &Dense, target: impl Fn(usize, usize) -> f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.n {
        for j in 0..b.n {
            worst = worst.max((dot4(a.row(i), b.row(j)) - target(i, j)).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, Serialize)]
pub struct SchemeSpectrum {
    pub p: [[f64; 6]; 6],
    pub q: [[f64; 6]; 6],
    pub multiplicities: Vec<f64>,
    pub tol: f64,
    /// Largest residual over all identities, in absolute units.
    pub max_residual: f64,
}

/// Builds `E_j = (1/|X|) Σ_i q_ij A_i` from the closed-form `Q` and checks
/// `PQ = |X|I`, `E_0 = J/|X|`, `Σ E_j = I`, `E_i E_j = δ_ij E_i`,
/// `A_j = Σ_i p_ij E_i` and `tr E_j = q_0j`.
pub fn spectrum_report(
    s: &AssociationScheme,
    v: usize,
    k: u64,
) -> Result<(SchemeSpectrum, Report)> {
    if s.d() != 5 || s.order() != 4 * v || v as u64 <= k {
        return Err(Error::InvalidParameter(format!(
            "spectrum needs 6 classes of order 4v with v > k; got {} of order {} for (v, k) = ({v}, {k})",
            s.d() + 1,
            s.order()
        )));
    }
    let (p, q) = eigenmatrices(v, k);
    let nx = s.order();
    let size = nx as f64;
    let bound = SPECTRUM_TOL * size;
    let mut r = Report::new("spectrum");
    let mut worst = 0.0f64;
    let mut record = |r: &mut Report, name: String, res: f64| {
        worst = worst.max(res);
        r.push_detail(name, res <= bound, format!("residual {res:.3e}"));
    };

    let mut pq = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            let x: f64 = (0..6).map(|l| p[i][l] * q[l][j]).sum();
            let want = if i == j { size } else { 0.0 };
            pq = pq.max((x - want).abs());
        }
    }
    record(&mut r, format!("PQ = {nx}I"), pq);

    let es: Vec<Dense> = (0..6)
        .map(|j| {
            let mut e = Dense::zeros(nx);
            for (i, a) in s.classes.iter().enumerate() {
                e.axpy(q[i][j] / size, a);
            }
            e
        })
        .collect();

    let e0 = es[0]
        .data
        .iter()
        .map(|x| (x - 1.0 / size).abs())
        .fold(0.0, f64::max);
    record(&mut r, format!("E_0 = J/{nx}"), e0);

    let mut total = Dense::zeros(nx);
    for e in &es {
        for (t, x) in total.data.iter_mut().zip(&e.data) {
            *t += x;
        }
    }
    let id = (0..nx * nx)
        .map(|c| (total.data[c] - if c % (nx + 1) == 0 { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    record(&mut r, "sum E_j = I".into(), id);

    let mut idem = 0.0f64;
    for i in 0..6 {
        for j in i..6 {
            // E_j is symmetric, so E_i E_j = E_i E_j^T.
            let res = if i == j {
                residual_product(&es[i], &es[j], |a, b| es[i].data[a * nx + b])
            } else {
                residual_product(&es[i], &es[j], |_, _| 0.0)
            };
            idem = idem.max(res);
        }
    }
    record(&mut r, "E_iE_j = delta_ij E_i".into(), idem);

    let mut expand = 0.0f64;
    for (j, a) in s.classes.iter().enumerate() {
        let mut sum = Dense::zeros(nx);
        for (i, e) in es.iter().enumerate() {
            for (t, x) in sum.data.iter_mut().zip(&e.data) {
                *t += p[i][j] * x;
            }
        }
        let res = sum
            .data
            .iter()
            .zip(a.as_slice())
            .map(|(x, &y)| (x - f64::from(y)).abs())
            .fold(0.0, f64::max);
        expand = expand.max(res);
    }
    record(&mut r, "A_j = sum_i p_ij E_i".into(), expand);

    let multiplicities: Vec<f64> = es.iter().map(Dense::trace).collect();
    let tr = multiplicities
        .iter()
        .zip(q[0])
        .map(|(m, want)| (m - want).abs())
        .fold(0.0, f64::max);
    record(&mut r, "tr E_j = q_0j".into(), tr);

    Ok((
        SchemeSpectrum {
            p,
            q,
            multiplicities,
            tol: SPECTRUM_TOL,
            max_residual: worst,
        },
        r,
    ))
}

/// [`spectrum_report`], failing with [`Error::SpectrumMismatch`] if any identity misses.
pub fn spectrum(s: &AssociationScheme, v: usize, k: u64) -> Result<SchemeSpectrum> {
    let (spec, r) = spectrum_report(s, v, k)?;
    if !r.passed() {
        return Err(Error::SpectrumMismatch(
            r.failures()
                .map(|c| format!("{} ({})", c.name, c.detail.as_deref().unwrap_or("")))
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    Ok(spec)
}

/// Roles `A_1..A_5` of the input classes, and the implied `k`.
fn identify_classes(
    s: &AssociationScheme,
    p: &IntersectionNumbers,
    v: usize,
) -> Option<([usize; 6], u64)> {
    let val = s.valencies();
    let perms = permutations(&[1, 2, 3, 4, 5]);
    perms.into_iter().find_map(|o| {
        let [c1, c2, c3, c4, c5] = [o[0], o[1], o[2], o[3], o[4]];
        let k = val[c3];
        let ok = val[c1] == 1
            && val[c2] == 2 * (v - 1)
            && val[c4] == k
            && val[c5] == 2 * (v - k)
            && p.get(c1, c1, 0) == 1
            && p.get(c1, c2, c2) == 1
            && p.get(c1, c5, c5) == 1
            && p.get(c1, c3, c4) == 1;
        ok.then_some(([0, c1, c2, c3, c4, c5], k as u64))
    })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Connected components of the graph of a 0/1 matrix, each sorted, ordered by
/// smallest vertex.
fn components(adj: &SignedMatrix) -> Vec<Vec<usize>> {
    let n = adj.rows();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for (y, &e) in adj.row(x).iter().enumerate() {
                if e != 0 && !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Pairs `{x, partner(x)}` of a perfect matching inside `comp`, ordered by
/// smaller vertex; each pair is `(smaller, larger)`.
fn matched_pairs(comp: &[usize], a1: &SignedMatrix) -> Option<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for &x in comp {
        let partners: Vec<usize> = (0..a1.cols()).filter(|&y| a1.get(x, y) != 0).collect();
        let [y] = partners[..] else { return None };
        if x < y {
            pairs.push((x, y));
        }
    }
    (pairs.len() * 2 == comp.len()).then_some(pairs)
}

/// Recovers a `BW(v, k, λ)` from a six-class scheme with the spectrum above.
pub fn extract_bw(s: &AssociationScheme) -> Result<SignedMatrix> {
    let p = intersection_numbers(s)?;
    if s.d() != 5 || !s.order().is_multiple_of(4) || s.order() == 0 {
        return Err(Error::InvalidParameter(format!(
            "expected 6 classes of order 4v, got {} of order {}",
            s.d() + 1,
            s.order()
        )));
    }
    let v = s.order() / 4;
    let (roles, k) = identify_classes(s, &p, v).ok_or_else(|| {
        Error::NotAScheme("no class assignment fits a weighing-matrix scheme".into())
    })?;
    if v < 2 {
        return Err(Error::InvalidParameter("v must be at least 2".into()));
    }
    let lambda = half_lambda(v, k)? as u64 * 2;
    let identity: Vec<usize> = (0..s.order()).collect();
    let canon = s.permuted(&roles, &identity)?;
    spectrum(&canon, v, k)?;

    let halves = canon.class(0).add(canon.class(1))?.add(canon.class(2))?;
    let comps = components(&halves);
    if comps.len() != 2 || comps.iter().any(|c| c.len() != 2 * v) {
        return Err(Error::NotAScheme(format!(
            "A_0 + A_1 + A_2 has components of sizes {:?}, expected two of size {}",
            comps.iter().map(Vec::len).collect::<Vec<_>>(),
            2 * v
        )));
    }
    let bad_matching = || Error::NotAScheme("A_1 is not a perfect matching within halves".into());
    let left = matched_pairs(&comps[0], canon.class(1)).ok_or_else(bad_matching)?;
    let right = matched_pairs(&comps[1], canon.class(1)).ok_or_else(bad_matching)?;

    let w = SignedMatrix::from_fn(v, v, |i, j| {
        let (x, y) = (left[i].0, right[j].0);
        if canon.class(3).get(x, y) != 0 {
            1
        } else if canon.class(4).get(x, y) != 0 {
            -1
        } else {
            0
        }
    });
    let cert = verify_bgw(&group_from_signed(&w)?, v, k, lambda)?;
    if !cert.passed() {
        return Err(Error::CertificateFailed(cert.to_string()));
    }
    // The reordered input must be exactly the scheme of the extracted matrix.
    let order: Vec<usize> = [&left, &right]
        .iter()
        .flat_map(|pairs| {
            pairs
                .iter()
                .map(|&(a, _)| a)
                .chain(pairs.iter().map(|&(_, b)| b))
                .collect::<Vec<_>>()
        })
        .collect();
    let all: Vec<usize> = (0..6).collect();
    if canon.permuted(&all, &order)? != scheme_unchecked(&w, v) {
        return Err(Error::NotAScheme(
            "classes do not take the block form of the extracted matrix".into(),
        ));
    }
    Ok(w)
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub scheme: AssociationScheme,
    /// Upper-right block of the third quotient class.
    pub incidence: SignedMatrix,
    /// Groups of original classes merged into each quotient class.
    pub merged: Vec<Vec<usize>>,
}

/// Collapses the fibers of `A_0 + A_1` (pairs) to points.
pub fn quotient_three_class(s: &AssociationScheme) -> Result<Quotient> {
    let p = intersection_numbers(s)?;
    if s.d() != 5 {
        return Err(Error::InvalidParameter(format!(
            "expected 6 classes, got {}",
            s.d() + 1
        )));
    }
    let n = s.order();
    let fiber = s.class(0).add(s.class(1))?;
    let sq = matmul(&fiber, &fiber)?;
    if sq != fiber.widen().scale(2)? {
        return Err(Error::NotAScheme(
            "A_0 + A_1 is not an equivalence with classes of size 2".into(),
        ));
    }

    // j ~ k iff A_i A_j hits A_k for i in {0, 1}.
    let d1 = s.d() + 1;
    let mut group: Vec<usize> = (0..d1).collect();
    fn root(g: &mut [usize], x: usize) -> usize {
        if g[x] != x {
            let r = root(g, g[x]);
            g[x] = r;
        }
        g[x]
    }
    for i in 0..2 {
        for j in 0..d1 {
            for k in 0..d1 {
                if p.get(i, j, k) != 0 {
                    let (a, b) = (root(&mut group, j), root(&mut group, k));
                    group[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut merged: Vec<Vec<usize>> = Vec::new();
    for j in 0..d1 {
        let r = root(&mut group, j);
        let roots: Vec<usize> = merged.iter().map(|g| root(&mut group, g[0])).collect();
        match roots.iter().position(|&x| x == r).map(|i| &mut merged[i]) {
            Some(g) => g.push(j),
            None => merged.push(vec![j]),
        }
    }
    let class_group: Vec<usize> = (0..d1)
        .map(|j| merged.iter().position(|g| g.contains(&j)).expect("grouped"))
        .collect();

    // Fibers ordered by component of the merged A_2 class, then smallest vertex.
    let fibers: Vec<(usize, usize)> = (0..n)
        .filter_map(|x| {
            let y = (0..n).find(|&y| y != x && s.class(1).get(x, y) != 0)?;
            (x < y).then_some((x, y))
        })
        .collect();
    if fibers.len() * 2 != n {
        return Err(Error::NotAScheme("A_1 is not a perfect matching".into()));
    }
    let m = fibers.len();
    let cell = |f: usize, g: usize| -> Result<usize> {
        let (a, b) = (fibers[f], fibers[g]);
        let pick = |x: usize, y: usize| {
            (0..d1)
                .find(|&c| s.class(c).get(x, y) != 0)
                .map(|c| class_group[c])
        };
        let vals = [
            pick(a.0, b.0),
            pick(a.0, b.1),
            pick(a.1, b.0),
            pick(a.1, b.1),
        ];
        match vals {
            [Some(x), ..] if vals.iter().all(|v| *v == Some(x)) => Ok(x),
            _ => Err(Error::NotAScheme(format!(
                "fibers {f},{g} are not block-constant"
            ))),
        }
    };
    let mut qmap = vec![0usize; m * m];
    for f in 0..m {
        for g in 0..m {
            qmap[f * m + g] = cell(f, g)?;
        }
    }
    let g_same = class_group[2];
    let same = SignedMatrix::from_fn(m, m, |f, g| i8::from(f == g || qmap[f * m + g] == g_same));
    let order: Vec<usize> = components(&same).concat();
    let classes: Vec<SignedMatrix> = (0..merged.len())
        .map(|c| SignedMatrix::from_fn(m, m, |f, g| i8::from(qmap[order[f] * m + order[g]] == c)))
        .collect();
    let scheme = AssociationScheme::new(classes)?;
    let half = m / 2;
    let incidence = scheme
        .class(class_group[3])
        .submatrix(0, half, half, half)?;
    Ok(Quotient {
        scheme,
        incidence,
        merged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::{gram, matches_affine};
    use crate::seeds::{assemble_mathon, seed_matrices, MathonVariant};

    fn mathon() -> SignedMatrix {
        assemble_mathon(&seed_matrices(), MathonVariant::U).unwrap()
    }

    fn pentagon() -> AssociationScheme {
        let a1 = SignedMatrix::from_fn(5, 5, |i, j| {
            i8::from((i + 5 - j) % 5 == 1 || (j + 5 - i) % 5 == 1)
        });
        let a2 = SignedMatrix::from_fn(5, 5, |i, j| i8::from(i != j && a1.get(i, j) == 0));
        AssociationScheme::new(vec![SignedMatrix::identity(5), a1, a2]).unwrap()
    }

    #[test]
    fn pentagon_is_a_scheme() {
        let r = verify_axioms(&pentagon()).unwrap();
        assert!(r.passed(), "{r}");
        let p = intersection_numbers(&pentagon()).unwrap();
        assert_eq!(p.get(1, 1, 0), 2);
        assert_eq!(p.get(1, 1, 2), 1);
    }

    #[test]
    fn asymmetric_classes_fail() {
        let a = SignedMatrix::from_fn(3, 3, |i, j| i8::from((j + 3 - i) % 3 == 1));
        let s = AssociationScheme::new(vec![SignedMatrix::identity(3), a.clone(), a.transpose()])
            .unwrap();
        let r = verify_axioms(&s).unwrap();
        assert!(!r.passed());
        assert!(!r.check("AS3 A_i symmetric").unwrap().passed);
        assert!(matches!(
            intersection_numbers(&s),
            Err(Error::NotAScheme(_))
        ));
    }

    #[test]
    fn mathon_scheme() {
        let s = scheme_from_bw(&mathon(), 19, 9, 4).unwrap();
        assert_eq!(s.order(), 76);
        assert_eq!(s.class(0), &SignedMatrix::identity(76));
        assert_eq!(s.valencies(), vec![1, 1, 36, 9, 9, 20]);
        assert!(verify_axioms(&s).unwrap().passed());
        let p = intersection_numbers(&s).unwrap();
        let b3 = vec![
            vec![0, 0, 0, 1, 0, 0],
            vec![0, 0, 0, 0, 1, 0],
            vec![0, 0, 0, 8, 8, 9],
            vec![9, 0, 2, 0, 0, 0],
            vec![0, 9, 2, 0, 0, 0],
            vec![0, 0, 5, 0, 0, 0],
        ];
        assert_eq!(p.b(3), b3);
        for j in 0..6 {
            for k in 0..6 {
                assert_eq!(p.get(0, j, k), i64::from(j == k));
            }
        }
        for (i, &val) in s.valencies().iter().enumerate() {
            for j in 0..6 {
                let total: i64 = (0..6)
                    .map(|k| p.get(i, j, k) * s.valencies()[k] as i64)
                    .sum();
                assert_eq!(total, val as i64 * s.valencies()[j] as i64);
            }
        }
        let t = class_identities(&s, 19, 9).unwrap();
        assert!(t.passed(), "{t}");
    }

    #[test]
    fn mathon_spectrum() {
        let s = scheme_from_bw(&mathon(), 19, 9, 4).unwrap();
        let (spec, r) = spectrum_report(&s, 19, 9).unwrap();
        assert!(r.passed(), "{r}");
        assert!((spec.p[1][3] - 3.0).abs() < 1e-12);
        assert!((spec.p[5][3] - 5f64.sqrt()).abs() < 1e-12);
        let want = [1.0, 19.0, 19.0, 1.0, 18.0, 18.0];
        for (m, w) in spec.multiplicities.iter().zip(want) {
            assert!((m - w).abs() < 1e-9);
        }
        // The wrong (v, k) must not certify.
        assert!(matches!(
            spectrum(&s, 19, 8),
            Err(Error::SpectrumMismatch(_))
        ));
    }

    #[test]
    fn roundtrip_and_quotient() {
        let w = mathon();
        let s = scheme_from_bw(&w, 19, 9, 4).unwrap();
        let back = extract_bw(&s).unwrap();
        assert!(matches_affine(&gram(&back).unwrap(), 9, 0));

        let q = quotient_three_class(&s).unwrap();
        assert_eq!(q.scheme.order(), 38);
        assert_eq!(q.scheme.valencies(), vec![1, 18, 9, 10]);
        assert!(verify_axioms(&q.scheme).unwrap().passed());
        assert!(matches_affine(&gram(&q.incidence).unwrap(), 5, 4));
        assert_eq!(q.merged, vec![vec![0, 1], vec![2], vec![3, 4], vec![5]]);
    }

    #[test]
    fn extraction_survives_relabeling() {
        let s = scheme_from_bw(&mathon(), 19, 9, 4).unwrap();
        let n = s.order();
        let vertices: Vec<usize> = (0..n).map(|x| (x * 29 + 7) % n).collect();
        let shuffled = s.permuted(&[0, 5, 3, 1, 4, 2], &vertices).unwrap();
        assert!(verify_axioms(&shuffled).unwrap().passed());
        let back = extract_bw(&shuffled).unwrap();
        assert!(matches_affine(&gram(&back).unwrap(), 9, 0));
    }

    #[test]
    fn preconditions() {
        let h = SignedMatrix::from_rows(&[vec![1, 1], vec![1, -1]]).unwrap();
        assert!(matches!(
            scheme_from_bw(&h, 2, 2, 2),
            Err(Error::InvalidParameter(_))
        ));
        let mut bad = mathon().into_vec();
        bad[0] = -bad[0];
        let bad = SignedMatrix::new(19, 19, bad).unwrap();
        assert!(matches!(
            scheme_from_bw(&bad, 19, 9, 4),
            Err(Error::CertificateFailed(_))
        ));
        assert!(extract_bw(&pentagon()).is_err());
    }
}
