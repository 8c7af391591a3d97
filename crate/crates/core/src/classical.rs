//! The classical `BGW((q^{m+1}-1)/(q-1), q^m, q^m - q^{m-1}; C_n)`, `n | q-1`.
//!
//! Two realizations are provided:
//!
//! * [`classical_bgw`]: entry `(i, j)` is the character of `T(ω^{i+j})`, with `T`
//!   the relative trace `GF(q^{m+1}) -> GF(q)`. Constant along anti-diagonals.
//! * [`projective_bgw`]: rows are the points `x` of `PG(m, q)` normalized with
//!   first nonzero coordinate 1, columns the points `y` normalized with last
//!   nonzero coordinate 1, and the entry is the character of `<x, y>`.
//!
//! Both are balanced. The second one additionally makes `Σ_t i^t W_t` have a
//! real product with its (non-conjugate) transpose when `n = 4`, which is what
//! the Kronecker family needs; see [`crate::family`].

use crate::error::{Error, Result};
use crate::exactmat::SignedMatrix;
use crate::gf::{self, field_make, Extension, FiniteField};
use crate::groupmat::{is_symmetric_design, Cell, CyclicGroupMatrix};

/// Validated parameters shared by both constructions.
struct Params {
    p: u32,
    e: u32,
    q: u32,
    v: usize,
}

fn check_params(q: u64, m: u32, n: u32) -> Result<Params> {
    let (p, e) = gf::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if p == 2 {
        return Err(Error::InvalidParameter(format!("q = {q} must be odd")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    if n == 0 || !(q - 1).is_multiple_of(u64::from(n)) {
        return Err(Error::NotDivisible {
            what: "group order into q-1",
            divisor: u64::from(n),
            value: q - 1,
        });
    }
    let big = q
        .checked_pow(m + 1)
        .filter(|&o| o <= gf::MAX_ORDER)
        .ok_or(Error::FieldTooLarge(q.saturating_pow(m + 1)))?;
    Ok(Params {
        p,
        e,
        q: q as u32,
        v: ((big - 1) / (q - 1)) as usize,
    })
}

fn character(f: &FiniteField, x: u32, n: u32) -> Result<Cell> {
    Ok(if x == 0 {
        Cell::Zero
    } else {
        Cell::Exp(f.dlog(x)? % n)
    })
}

/// Trace construction: `W[i][j] = χ(T(ω^{i+j}))`, `0 <= i, j < v`.
pub fn classical_bgw(q: u64, m: u32, n: u32) -> Result<CyclicGroupMatrix> {
    let Params { p, e, v, .. } = check_params(q, m, n)?;
    let ext = Extension::new(field_make(p, e * (m + 1))?, field_make(p, e)?)?;
    let traces = (0..2 * v as u64)
        .map(|s| ext.trace(ext.big.exp(s)))
        .collect::<Result<Vec<u32>>>()?;
    let cells = (0..2 * v)
        .map(|s| character(&ext.sub, traces[s], n))
        .collect::<Result<Vec<Cell>>>()?;
    CyclicGroupMatrix::from_fn(v, v, n, |i, j| cells[i + j])
}

fn normalized(x: &[u32], last: bool) -> bool {
    let lead = if last {
        x.iter().rev().find(|&&c| c != 0)
    } else {
        x.iter().find(|&&c| c != 0)
    };
    lead == Some(&1)
}

/// Coordinate construction: `W[x][y] = χ(<x, y>)` over projective points.
pub fn projective_bgw(q: u64, m: u32, n: u32) -> Result<CyclicGroupMatrix> {
    let Params { p, e, q, v } = check_params(q, m, n)?;
    let f = field_make(p, e)?;
    let all = gf::vectors(q, m as usize + 1);
    let rows: Vec<&Vec<u32>> = all.iter().filter(|x| normalized(x, false)).collect();
    let cols: Vec<&Vec<u32>> = all.iter().filter(|x| normalized(x, true)).collect();
    debug_assert_eq!(rows.len(), v);
    debug_assert_eq!(cols.len(), v);
    let mut cells = Vec::with_capacity(v * v);
    for x in &rows {
        for y in &cols {
            cells.push(character(&f, f.dot(x, y), n)?);
        }
    }
    CyclicGroupMatrix::new(v, v, n, cells)
}

/// The support of a square group matrix and whether it is a symmetric design.
#[derive(Debug, Clone)]
pub struct SupportDesign {
    pub incidence: SignedMatrix,
    pub v: usize,
    pub k: u64,
    /// `k(k-1)/(v-1)`; `None` if not an integer.
    pub lambda: Option<u64>,
    pub ok: bool,
}

/// Reads `k` off the first row, derives `λ`, and checks `N N^T = (k-λ)I + λJ`.
pub fn support_design(w: &CyclicGroupMatrix) -> Result<SupportDesign> {
    if w.rows() != w.cols() {
        return Err(Error::DimensionMismatch {
            op: "support_design",
            left: (w.rows(), w.cols()),
            right: (w.cols(), w.rows()),
        });
    }
    let incidence = w.support();
    let v = w.rows();
    let k = incidence.row_weights().first().copied().unwrap_or(0) as u64;
    let lambda = if v <= 1 {
        Some(0)
    } else {
        let num = k * k.saturating_sub(1);
        num.is_multiple_of(v as u64 - 1)
            .then(|| num / (v as u64 - 1))
    };
    let ok = match lambda {
        Some(l) => is_symmetric_design(&incidence, k, l)?,
        None => false,
    };
    Ok(SupportDesign {
        incidence,
        v,
        k,
        lambda,
        ok,
    })
}
