//! Matrices over `C_n ∪ {0}` and the BGW certificate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{self, SignedMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Zero,
    /// The group element `w^t`, `t < n`.
    Exp(u32),
}

const ZERO: u32 = u32::MAX;

impl Cell {
    fn pack(self) -> u32 {
        match self {
            Cell::Zero => ZERO,
            Cell::Exp(t) => t,
        }
    }

    fn unpack(raw: u32) -> Cell {
        if raw == ZERO {
            Cell::Zero
        } else {
            Cell::Exp(raw)
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CyclicGroupMatrix {
    rows: usize,
    cols: usize,
    n: u32,
    /// Exponents, `ZERO` for the zero cell.
    cells: Vec<u32>,
}

impl std::fmt::Debug for CyclicGroupMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CyclicGroupMatrix {}x{} over C_{}",
            self.rows, self.cols, self.n
        )
    }
}

impl CyclicGroupMatrix {
    pub fn new(rows: usize, cols: usize, n: u32, cells: Vec<Cell>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "group order must be at least 1".into(),
            ));
        }
        if cells.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "{rows}x{cols} group matrix needs {} cells, got {}",
                rows * cols,
                cells.len()
            )));
        }
        if let Some(bad) = cells.iter().find(|c| matches!(c, Cell::Exp(t) if *t >= n)) {
            return Err(Error::InvalidParameter(format!(
                "{bad:?} out of range for C_{n}"
            )));
        }
        Ok(CyclicGroupMatrix {
            rows,
            cols,
            n,
            cells: cells.into_iter().map(Cell::pack).collect(),
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        n: u32,
        mut f: impl FnMut(usize, usize) -> Cell,
    ) -> Result<Self> {
        let mut cells = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                cells.push(f(r, c));
            }
        }
        Self::new(rows, cols, n, cells)
    }

    pub fn zeros(rows: usize, cols: usize, n: u32) -> Result<Self> {
        Self::new(rows, cols, n, vec![Cell::Zero; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Cell {
        Cell::unpack(self.cells[r * self.cols + c])
    }

    fn raw_row(&self, r: usize) -> &[u32] {
        &self.cells[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut cells = Vec::with_capacity(self.cells.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                cells.push(self.cells[r * self.cols + c]);
            }
        }
        CyclicGroupMatrix {
            rows: self.cols,
            cols: self.rows,
            n: self.n,
            cells,
        }
    }

    /// `out[i][j] = self[row_perm[i]][col_perm[j]]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        if row_perm.len() != self.rows || col_perm.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "permuted",
                left: (self.rows, self.cols),
                right: (row_perm.len(), col_perm.len()),
            });
        }
        Self::from_fn(self.rows, self.cols, self.n, |r, c| {
            self.get(row_perm[r], col_perm[c])
        })
    }

    /// Multiplies column `col` by `w^t`.
    pub fn scale_column(&self, col: usize, t: u32) -> Self {
        let mut out = self.clone();
        for r in 0..self.rows {
            let x = &mut out.cells[r * self.cols + col];
            if *x != ZERO {
                *x = (*x + t) % self.n;
            }
        }
        out
    }

    /// Multiplies row `row` by `w^t`.
    pub fn scale_row(&self, row: usize, t: u32) -> Self {
        let mut out = self.clone();
        for x in &mut out.cells[row * self.cols..(row + 1) * self.cols] {
            if *x != ZERO {
                *x = (*x + t) % self.n;
            }
        }
        out
    }

    /// The 0/1 pattern of nonzero cells.
    pub fn support(&self) -> SignedMatrix {
        SignedMatrix::from_fn(self.rows, self.cols, |r, c| {
            i8::from(self.cells[r * self.cols + c] != ZERO)
        })
    }
}

/// `W_i[x][y] = 1` iff `W[x][y] = w^i`, for `i in 0..n`.
pub fn layers(w: &CyclicGroupMatrix) -> Vec<SignedMatrix> {
    (0..w.n)
        .map(|i| {
            SignedMatrix::from_fn(w.rows, w.cols, |r, c| {
                i8::from(w.cells[r * w.cols + c] == i)
            })
        })
        .collect()
}

fn lambda_over_n(n: usize, lambda: u64) -> Result<i64> {
    if !lambda.is_multiple_of(n as u64) {
        return Err(Error::NotDivisible {
            what: "lambda by group order",
            divisor: n as u64,
            value: lambda,
        });
    }
    Ok((lambda / n as u64) as i64)
}

/// `[L_s | L_{s+1} | ... | L_{s+n-1}]`, indices mod n.
fn shifted_concat(layers: &[SignedMatrix], s: usize) -> Result<SignedMatrix> {
    let n = layers.len();
    let parts: Vec<&SignedMatrix> = (0..n).map(|i| &layers[(i + s) % n]).collect();
    SignedMatrix::hcat(&parts)
}

/// The layer form of `W W^* = kI` (rows) and `W^* W = kI` (columns):
/// `Σ_i W_i W_{i+j}^T = Σ_i W_{i+j}^T W_i = δ_{j0} k I + (λ/n)(J - I)`.
pub fn check_layer_identities(layers: &[SignedMatrix], k: u64, lambda: u64) -> Result<bool> {
    let n = layers.len();
    if n == 0 {
        return Err(Error::InvalidParameter("no layers".into()));
    }
    let mu = lambda_over_n(n, lambda)?;
    let (v, cols) = layers[0].shape();
    if let Some(bad) = layers.iter().find(|l| l.shape() != (v, cols)) {
        return Err(Error::DimensionMismatch {
            op: "check_layer_identities",
            left: (v, cols),
            right: bad.shape(),
        });
    }
    let k = k as i64;
    let transposed: Vec<SignedMatrix> = layers.iter().map(SignedMatrix::transpose).collect();
    for family in [layers, &transposed[..]] {
        let base = shifted_concat(family, 0)?;
        for j in 0..n {
            let shifted = shifted_concat(family, j)?;
            let diag = if j == 0 { k - mu } else { -mu };
            if !exactmat::product_matches_affine(&base, &shifted, diag, mu)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BgwCertificate {
    pub v: usize,
    pub k: u64,
    pub lambda: u64,
    pub n: u32,
    pub balanced: bool,
    pub layer_identities_ok: bool,
    pub support_design_ok: bool,
}

impl BgwCertificate {
    pub fn counting_identity(&self) -> bool {
        self.lambda * (self.v as u64).saturating_sub(1) == self.k * self.k.saturating_sub(1)
    }

    pub fn passed(&self) -> bool {
        self.balanced
            && self.layer_identities_ok
            && self.support_design_ok
            && self.counting_identity()
    }
}

impl std::fmt::Display for BgwCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = |b: bool| if b { "PASS" } else { "FAIL" };
        write!(
            f,
            "BGW({},{},{};C_{}): {} [balanced {}, layers {}, support design {}, counting {}]",
            self.v,
            self.k,
            self.lambda,
            self.n,
            v(self.passed()),
            v(self.balanced),
            v(self.layer_identities_ok),
            v(self.support_design_ok),
            v(self.counting_identity()),
        )
    }
}

/// Brute-force balance: every row (and column) has `k` nonzeros and, for
/// each pair of distinct rows, the quotients `w_ia / w_ja` over the common
/// support hit every group element `λ/n` times.
fn rows_balanced(w: &CyclicGroupMatrix, k: u64, mu: u64) -> bool {
    let n = w.n as usize;
    // Cells recoded so that zero is `n`; `diff[a * (n+1) + b]` is `a - b mod n`,
    // or the discard slot `n` when `b` is zero. This keeps the inner loop free
    // of branches.
    let codes: Vec<u32> = w
        .cells
        .iter()
        .map(|&x| if x == ZERO { w.n } else { x })
        .collect();
    if n > 1 << 10 {
        return rows_balanced_direct(w, k, mu);
    }
    let mut diff = vec![0u32; n * (n + 1)];
    for a in 0..n {
        for b in 0..=n {
            diff[a * (n + 1) + b] = if b == n {
                n as u32
            } else {
                ((a + n - b) % n) as u32
            };
        }
    }
    let supports: Vec<Vec<(usize, usize)>> = (0..w.rows)
        .map(|r| {
            w.raw_row(r)
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != ZERO)
                .map(|(c, &x)| (c, x as usize * (n + 1)))
                .collect()
        })
        .collect();
    if supports.iter().any(|s| s.len() as u64 != k) {
        return false;
    }
    let mut tally = vec![0u64; n + 1];
    // Unordered pairs suffice: swapping the rows negates every quotient,
    // which preserves a uniform tally.
    for i in 0..w.rows {
        for j in i + 1..w.rows {
            let other = &codes[j * w.cols..(j + 1) * w.cols];
            tally.iter_mut().for_each(|t| *t = 0);
            for &(c, base) in &supports[i] {
                tally[diff[base + other[c] as usize] as usize] += 1;
            }
            if tally[..n].iter().any(|&t| t != mu) {
                return false;
            }
        }
    }
    true
}

/// Same tally without the lookup table, for large groups.
fn rows_balanced_direct(w: &CyclicGroupMatrix, k: u64, mu: u64) -> bool {
    let mut tally = std::collections::HashMap::new();
    for i in 0..w.rows {
        let row = w.raw_row(i);
        if row.iter().filter(|&&x| x != ZERO).count() as u64 != k {
            return false;
        }
        for j in i + 1..w.rows {
            tally.clear();
            for (&a, &b) in row.iter().zip(w.raw_row(j)) {
                if a != ZERO && b != ZERO {
                    *tally.entry((a + w.n - b) % w.n).or_insert(0u64) += 1;
                }
            }
            let uniform = if mu == 0 {
                tally.is_empty()
            } else {
                tally.len() == w.n as usize && tally.values().all(|&t| t == mu)
            };
            if !uniform {
                return false;
            }
        }
    }
    true
}

/// Full certificate for a claimed `BGW(v, k, λ; C_n)`.
pub fn verify_bgw(w: &CyclicGroupMatrix, v: usize, k: u64, lambda: u64) -> Result<BgwCertificate> {
    if w.rows != v || w.cols != v {
        return Err(Error::DimensionMismatch {
            op: "verify_bgw",
            left: (w.rows, w.cols),
            right: (v, v),
        });
    }
    let mu = lambda_over_n(w.n as usize, lambda)? as u64;
    let balanced = rows_balanced(w, k, mu) && rows_balanced(&w.transpose(), k, mu);
    let layer_identities_ok = check_layer_identities(&layers(w), k, lambda)?;
    let support_design_ok = is_symmetric_design(&w.support(), k, lambda)?;
    Ok(BgwCertificate {
        v,
        k,
        lambda,
        n: w.n,
        balanced,
        layer_identities_ok,
        support_design_ok,
    })
}

/// `N N^T = (k - λ) I + λ J` with constant row sums `k`.
pub fn is_symmetric_design(n: &SignedMatrix, k: u64, lambda: u64) -> Result<bool> {
    if !n.is_square() || !n.is_binary() {
        return Ok(false);
    }
    if n.row_weights().iter().any(|&w| w as u64 != k) {
        return Ok(false);
    }
    exactmat::product_matches_affine(n, n, k as i64 - lambda as i64, lambda as i64)
}

/// Zero → 0, `w^0` → +1, `w^1` → −1.
pub fn signed_from_z2(w: &CyclicGroupMatrix) -> Result<SignedMatrix> {
    if w.n != 2 {
        return Err(Error::InvalidParameter(format!(
            "signed conversion needs n = 2, got {}",
            w.n
        )));
    }
    Ok(SignedMatrix::from_fn(w.rows, w.cols, |r, c| {
        match w.get(r, c) {
            Cell::Zero => 0,
            Cell::Exp(0) => 1,
            Cell::Exp(_) => -1,
        }
    }))
}

/// Inverse of [`signed_from_z2`]; fails on entries outside {-1, 0, 1}.
pub fn group_from_signed(m: &SignedMatrix) -> Result<CyclicGroupMatrix> {
    let cells = m
        .as_slice()
        .iter()
        .map(|&x| match x {
            0 => Ok(Cell::Zero),
            1 => Ok(Cell::Exp(0)),
            -1 => Ok(Cell::Exp(1)),
            other => Err(Error::InvalidParameter(format!(
                "entry {other} is not a sign"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    CyclicGroupMatrix::new(m.rows(), m.cols(), 2, cells)
}
