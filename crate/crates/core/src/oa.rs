//! Complete strength-2 orthogonal arrays `OA(q^n, (q^n-1)/(q-1), q, 2)`.
//!
//! Rows are the vectors `x ∈ GF(q)^n` in lexicographic order, columns the
//! projective points `c` with first nonzero coordinate 1, and the entry is
//! `<x, c> + 1` so symbols run over `1..=q`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{self, SignedMatrix};
use crate::gf::{self, field_make};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalArray {
    runs: usize,
    factors: usize,
    q: u32,
    strength: u32,
    index: u64,
    /// Symbols in `1..=q`, row-major.
    entries: Vec<u32>,
}

impl OrthogonalArray {
    /// Wraps a raw array, checking the alphabet and `N = index * q^strength`.
    pub fn new(
        runs: usize,
        factors: usize,
        q: u32,
        strength: u32,
        index: u64,
        entries: Vec<u32>,
    ) -> Result<Self> {
        if entries.len() != runs * factors {
            return Err(Error::InvalidParameter(format!(
                "{runs}x{factors} array needs {} entries, got {}",
                runs * factors,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&s| s == 0 || s > q) {
            return Err(Error::InvalidParameter(format!(
                "symbol {bad} outside 1..={q}"
            )));
        }
        let expected = u64::from(q)
            .checked_pow(strength)
            .and_then(|t| t.checked_mul(index));
        if expected != Some(runs as u64) {
            return Err(Error::InvalidParameter(format!(
                "run count {runs} != {index} * {q}^{strength}"
            )));
        }
        Ok(OrthogonalArray {
            runs,
            factors,
            q,
            strength,
            index,
            entries,
        })
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn strength(&self) -> u32 {
        self.strength
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.factors + c]
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.factors..(r + 1) * self.factors]
    }

    /// Meets the Rao bound for strength 2: `N = 1 + k(q-1)`.
    pub fn is_complete(&self) -> bool {
        self.strength == 2 && self.runs as u64 == 1 + self.factors as u64 * u64::from(self.q - 1)
    }

    /// `n` with `N = q^n`, if there is one.
    pub fn dimension(&self) -> Option<u32> {
        let q = self.q as usize;
        let (mut n, mut t) = (0, 1usize);
        while t < self.runs {
            t = t.checked_mul(q)?;
            n += 1;
        }
        (t == self.runs).then_some(n)
    }

    /// Replaces the symbol at `(r, c)`; used to build corrupted fixtures.
    pub fn with_entry(&self, r: usize, c: usize, symbol: u32) -> Result<Self> {
        let mut entries = self.entries.clone();
        entries[r * self.factors + c] = symbol;
        Self::new(
            self.runs,
            self.factors,
            self.q,
            self.strength,
            self.index,
            entries,
        )
    }
}

pub fn build_oa(q: u64, n: u32) -> Result<OrthogonalArray> {
    let (p, e) = gf::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if p == 2 {
        return Err(Error::InvalidParameter(format!("q = {q} must be odd")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "n = {n} must be at least 2"
        )));
    }
    let runs = q
        .checked_pow(n)
        .filter(|&r| r <= gf::MAX_ORDER)
        .ok_or(Error::FieldTooLarge(q.saturating_pow(n)))? as usize;
    let f = field_make(p, e)?;
    let rows = gf::vectors(q as u32, n as usize);
    let cols: Vec<&Vec<u32>> = rows
        .iter()
        .filter(|c| c.iter().find(|&&x| x != 0) == Some(&1))
        .collect();
    let mut entries = Vec::with_capacity(runs * cols.len());
    for x in &rows {
        for c in &cols {
            entries.push(f.dot(x, c) + 1);
        }
    }
    OrthogonalArray::new(runs, cols.len(), q as u32, 2, q.pow(n - 2), entries)
}

/// Every ordered symbol pair appears exactly `index` times in every pair of
/// columns. Vacuously true with fewer than two columns.
pub fn verify_strength2(a: &OrthogonalArray) -> bool {
    if a.strength != 2 || a.runs as u64 != a.index * u64::from(a.q) * u64::from(a.q) {
        return false;
    }
    let q = a.q as usize;
    let mut counts = vec![0u64; q * q];
    // Column-major copy keeps the inner loop contiguous.
    let cols: Vec<Vec<u32>> = (0..a.factors)
        .map(|c| (0..a.runs).map(|r| a.get(r, c) - 1).collect())
        .collect();
    for c1 in 0..a.factors {
        for c2 in c1 + 1..a.factors {
            counts.iter_mut().for_each(|x| *x = 0);
            for (&s, &t) in cols[c1].iter().zip(&cols[c2]) {
                counts[s as usize * q + t as usize] += 1;
            }
            if counts.iter().any(|&x| x != a.index) {
                return false;
            }
        }
    }
    true
}

/// `C(a, b)` for any integer `a` and `b >= 0`.
fn binomial(a: i128, b: u64) -> i128 {
    let mut num = 1i128;
    let mut den = 1i128;
    for i in 0..i128::from(b) {
        num *= a - i;
        den *= i + 1;
        let g = gcd(num.abs(), den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// `K_{k,q,i}(x) = Σ_j (-1)^j (q-1)^{i-j} C(x, j) C(k-x, i-j)`.
pub fn krawtchouk(k: u64, q: u64, i: u64, x: i64) -> i128 {
    let (k, q, x) = (i128::from(k), i128::from(q), i128::from(x));
    (0..=i)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * (q - 1).pow((i - j) as u32) * binomial(x, j) * binomial(k - x, i - j)
        })
        .sum()
}

/// The distance `d` with `1 + K_{k,q,1}(d) = 0`, if it is an integer in `0..=k`.
pub fn krawtchouk_distance(k: u64, q: u64) -> Option<u64> {
    (0..=k).find(|&d| 1 + krawtchouk(k, q, 1, d as i64) == 0)
}

/// The common Hamming distance between distinct rows of a complete array,
/// cross-checked against the Krawtchouk root and `q^{n-1}`.
pub fn constant_distance(a: &OrthogonalArray) -> Result<u64> {
    if !a.is_complete() {
        return Err(Error::InvalidParameter(
            "array is not complete of strength 2".into(),
        ));
    }
    let mut d = None;
    for r1 in 0..a.runs {
        let x = a.row(r1);
        for r2 in r1 + 1..a.runs {
            let dist = x.iter().zip(a.row(r2)).filter(|(s, t)| s != t).count() as u64;
            match d {
                None => d = Some(dist),
                Some(d0) if d0 != dist => {
                    return Err(Error::CertificateFailed(format!(
                        "rows {r1},{r2} at distance {dist}, earlier pairs at {d0}"
                    )))
                }
                _ => {}
            }
        }
    }
    let d = d.unwrap_or(0);
    let root = krawtchouk_distance(a.factors as u64, u64::from(a.q));
    if a.runs > 1 && root != Some(d) {
        return Err(Error::CertificateFailed(format!(
            "distance {d} is not the Krawtchouk root {root:?}"
        )));
    }
    if let Some(n) = a.dimension() {
        let want = u64::from(a.q).pow(n.saturating_sub(1));
        if a.runs > 1 && d != want {
            return Err(Error::CertificateFailed(format!(
                "distance {d} != q^(n-1) = {want}"
            )));
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OaLayerCheck {
    /// Layers are disjoint and cover every cell.
    pub partition: bool,
    /// `Σ A_i A_i^T = ((q^{n-1}-1)/(q-1)) J + q^{n-1} I`.
    pub same_symbol: bool,
    /// `Σ_{i≠j} A_i A_j^T = q^{n-1} (J - I)`.
    pub cross_symbol: bool,
}

impl OaLayerCheck {
    pub fn passed(&self) -> bool {
        self.partition && self.same_symbol && self.cross_symbol
    }
}

/// `A_i[x][l] = 1` iff `A[x][l] = i`; `result[i-1]` is `A_i`.
pub fn layers(a: &OrthogonalArray) -> Vec<SignedMatrix> {
    (1..=a.q)
        .map(|s| SignedMatrix::from_fn(a.runs, a.factors, |r, c| i8::from(a.get(r, c) == s)))
        .collect()
}

/// Layers plus the two agreement/disagreement identities.
pub fn oa_layers(a: &OrthogonalArray) -> Result<(Vec<SignedMatrix>, OaLayerCheck)> {
    let ls = layers(a);
    let mut cover = SignedMatrix::zeros(a.runs, a.factors);
    for l in &ls {
        cover = cover.add(l)?;
    }
    let partition = cover == SignedMatrix::ones(a.runs, a.factors);

    let Some(n) = a.dimension().filter(|&n| n >= 1) else {
        return Ok((
            ls,
            OaLayerCheck {
                partition,
                same_symbol: false,
                cross_symbol: false,
            },
        ));
    };
    let q = i64::from(a.q);
    let qn1 = q.pow(n - 1);
    let agree = (qn1 - 1) / (q - 1);

    let refs: Vec<&SignedMatrix> = ls.iter().collect();
    let concat = SignedMatrix::hcat(&refs)?;
    let same_symbol = exactmat::product_matches_affine(&concat, &concat, qn1, agree)?;
    // [cover - A_1 | cover - A_2 | ...] pairs every A_i with Σ_{j≠i} A_j.
    let others: Vec<SignedMatrix> = ls.iter().map(|l| cover.sub(l)).collect::<Result<_>>()?;
    let others_refs: Vec<&SignedMatrix> = others.iter().collect();
    let complement = SignedMatrix::hcat(&others_refs)?;
    let cross_symbol = exactmat::product_matches_affine(&concat, &complement, -qn1, qn1)?;
    Ok((
        ls,
        OaLayerCheck {
            partition,
            same_symbol,
            cross_symbol,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_arrays() {
        let a = build_oa(3, 2).unwrap();
        assert_eq!((a.runs(), a.factors(), a.q(), a.index()), (9, 4, 3, 1));
        assert!(a.is_complete());
        assert!(verify_strength2(&a));
        assert_eq!(constant_distance(&a).unwrap(), 3);
        let (ls, check) = oa_layers(&a).unwrap();
        assert_eq!(ls.len(), 3);
        assert!(check.passed(), "{check:?}");
        // First row is the zero vector: symbol 1 everywhere.
        assert!(a.row(0).iter().all(|&s| s == 1));
    }

    #[test]
    fn arrays_for_several_orders() {
        for q in [3u64, 5, 9] {
            for n in [2, 3] {
                let a = build_oa(q, n).unwrap();
                assert_eq!(a.index(), q.pow(n - 2));
                assert!(verify_strength2(&a), "q={q} n={n}");
                assert!(oa_layers(&a).unwrap().1.passed());
                if q.pow(n) <= 125 {
                    assert_eq!(constant_distance(&a).unwrap(), q.pow(n - 1));
                }
            }
        }
    }

    #[test]
    fn krawtchouk_values() {
        assert_eq!(krawtchouk(4, 3, 0, 7), 1);
        assert_eq!(krawtchouk(4, 3, 1, 3), -1);
        assert_eq!(krawtchouk_distance(4, 3), Some(3));
        assert_eq!(krawtchouk_distance(10, 9), Some(9));
        assert_eq!(krawtchouk_distance(91, 9), Some(81));
        // Degree 2 at x = 0 counts words of weight 2: C(k,2)(q-1)^2.
        assert_eq!(krawtchouk(5, 3, 2, 0), 10 * 4);
    }

    #[test]
    fn single_column_is_vacuous() {
        let a = OrthogonalArray::new(4, 1, 2, 2, 1, vec![1, 2, 1, 2]).unwrap();
        assert!(verify_strength2(&a));
    }

    #[test]
    fn bad_inputs() {
        assert!(build_oa(3, 1).is_err());
        assert!(build_oa(4, 2).is_err());
        assert!(OrthogonalArray::new(2, 1, 2, 2, 1, vec![1, 2]).is_err());
        assert!(OrthogonalArray::new(4, 1, 2, 2, 1, vec![1, 2, 3, 1]).is_err());
    }

    proptest! {
        #[test]
        fn any_mutation_breaks_strength(r in 0usize..27, c in 0usize..13, bump in 1u32..3) {
            let a = build_oa(3, 3).unwrap();
            let s = (a.get(r, c) - 1 + bump) % 3 + 1;
            let bad = a.with_entry(r, c, s).unwrap();
            prop_assert!(!verify_strength2(&bad));
            prop_assert!(!oa_layers(&bad).unwrap().1.passed());
        }
    }
}
