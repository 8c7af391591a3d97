//! The Kronecker family `BW(1 + 18v', 9^{m+1}, 4·9^m)`, `v' = (9^{m+1}-1)/8`.
//!
//! ```text
//! R = W_0⊗U - W_1⊗V - W_2⊗U + W_3⊗V        (10v' × 18v')
//! D = Σ_i A_i ⊗ y_i                          (9^{m+1} × 18v')
//! X = [[j, D], [0, R]]
//! ```
//!
//! `W` is a `BGW(v', 9^m, 9^m - 9^{m-1}; C_4)` with layers `W_t`, `A` the
//! complete `OA(9^{m+1}, v', 9, 2)` with layers `A_i`, and `y_i` the rows of `Y`.
//!
//! `RR^T = 9^{m+1} I` needs more than `W` being a BGW: writing `W = Σ i^t W_t`,
//! the non-conjugate product `W W^T` must be real. The trace construction
//! fails this; the coordinate construction
//! ([`crate::classical::projective_bgw`]) satisfies it, so that is what
//! [`build_x`] uses.

use crate::classical::projective_bgw;
use crate::error::{Error, Result};
use crate::exactmat::{abs_entrywise, product_matches_affine, SignedMatrix};
use crate::groupmat::{group_from_signed, verify_bgw, Cell, CyclicGroupMatrix};
use crate::oa::{build_oa, verify_strength2, OrthogonalArray};
use crate::report::Report;
use crate::seeds::{seed_matrices, verify_seed_identities, SeedTriple};

pub const MAX_LEVEL: u32 = 3;

/// `(v', k_W, λ_W)` of the `C_4` ingredient and `(v, k, λ)` of `X`.
pub fn parameters(m: u32) -> ((usize, u64, u64), (usize, u64, u64)) {
    let k = 9u64.pow(m);
    let vp = ((9 * k - 1) / 8) as usize;
    ((vp, k, k - k / 9), (1 + 18 * vp, 9 * k, 4 * k))
}

#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub m: u32,
    pub w: CyclicGroupMatrix,
    pub oa: OrthogonalArray,
    pub r: SignedMatrix,
    pub d: SignedMatrix,
    pub x: SignedMatrix,
}

/// Places `±U` / `±V` in the block of every nonzero cell of a `C_4` matrix.
pub fn build_r(w: &CyclicGroupMatrix, s: &SeedTriple) -> Result<SignedMatrix> {
    if w.n() != 4 {
        return Err(Error::InvalidParameter(format!(
            "R needs a C_4 matrix, got C_{}",
            w.n()
        )));
    }
    if s.u.shape() != s.v.shape() {
        return Err(Error::DimensionMismatch {
            op: "build_r",
            left: s.u.shape(),
            right: s.v.shape(),
        });
    }
    let (br, bc) = s.u.shape();
    let neg_u = s.u.neg()?;
    let neg_v = s.v.neg()?;
    let blocks = [&s.u, &neg_v, &neg_u, &s.v];
    let (rows, cols) = (w.rows() * br, w.cols() * bc);
    let mut data = vec![0i8; rows * cols];
    for a in 0..w.rows() {
        for b in 0..w.cols() {
            let Cell::Exp(t) = w.get(a, b) else { continue };
            let block = blocks[t as usize];
            for r in 0..br {
                let start = (a * br + r) * cols + b * bc;
                data[start..start + bc].copy_from_slice(block.row(r));
            }
        }
    }
    SignedMatrix::new(rows, cols, data)
}

/// `Σ_t W_t ⊗ S_t` for explicit 0/1 layers; fails on the first cell covered
/// by two layers.
pub fn build_r_from_layers(layers: &[SignedMatrix], s: &SeedTriple) -> Result<SignedMatrix> {
    if layers.len() != 4 {
        return Err(Error::InvalidParameter(format!(
            "expected 4 layers, got {}",
            layers.len()
        )));
    }
    let (rows, cols) = layers[0].shape();
    let mut cells = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let mut cell = Cell::Zero;
            for (t, l) in layers.iter().enumerate() {
                if l.shape() != (rows, cols) {
                    return Err(Error::DimensionMismatch {
                        op: "build_r_from_layers",
                        left: (rows, cols),
                        right: l.shape(),
                    });
                }
                match l.get(r, c) {
                    0 => {}
                    1 if cell == Cell::Zero => cell = Cell::Exp(t as u32),
                    1 => return Err(Error::LayerOverlap { row: r, col: c }),
                    other => {
                        return Err(Error::InvalidParameter(format!(
                            "layer entry {other} is not 0/1"
                        )))
                    }
                }
            }
            cells.push(cell);
        }
    }
    build_r(&CyclicGroupMatrix::new(rows, cols, 4, cells)?, s)
}

/// Row `x` of `D` is `y_{A[x][0]} | y_{A[x][1]} | ...`.
pub fn build_d(a: &OrthogonalArray, s: &SeedTriple) -> Result<SignedMatrix> {
    if a.q() != 9 || s.y.rows() != 9 {
        return Err(Error::InvalidParameter(format!(
            "D needs a 9-symbol array and 9 rows of Y, got q = {} and {} rows",
            a.q(),
            s.y.rows()
        )));
    }
    let w = s.y.cols();
    let cols = a.factors() * w;
    let mut data = Vec::with_capacity(a.runs() * cols);
    for x in 0..a.runs() {
        for &sym in a.row(x) {
            data.extend_from_slice(s.y.row(sym as usize - 1));
        }
    }
    SignedMatrix::new(a.runs(), cols, data)
}

/// `[[j, D], [0, R]]`.
pub fn assemble_x(d: &SignedMatrix, r: &SignedMatrix) -> Result<SignedMatrix> {
    let top = SignedMatrix::hcat(&[&SignedMatrix::ones(d.rows(), 1), d])?;
    let bottom = SignedMatrix::hcat(&[&SignedMatrix::zeros(r.rows(), 1), r])?;
    SignedMatrix::vcat(&[&top, &bottom])
}

/// Builds every ingredient, certifies each one, and assembles `X`.
pub fn build_x(m: u32) -> Result<FamilyInstance> {
    if !(1..=MAX_LEVEL).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "m = {m} outside 1..={MAX_LEVEL}"
        )));
    }
    let seeds = seed_matrices();
    let seed_report = verify_seed_identities(&seeds)?;
    if !seed_report.passed() {
        return Err(Error::CertificateFailed(seed_report.to_string()));
    }
    let ((vp, kw, lw), _) = parameters(m);
    let w = projective_bgw(9, m, 4)?;
    let cert = verify_bgw(&w, vp, kw, lw)?;
    if !cert.passed() {
        return Err(Error::CertificateFailed(cert.to_string()));
    }
    let oa = build_oa(9, m + 1)?;
    if !verify_strength2(&oa) {
        return Err(Error::CertificateFailed(
            "orthogonal array strength 2".into(),
        ));
    }
    let r = build_r(&w, &seeds)?;
    let d = build_d(&oa, &seeds)?;
    let x = assemble_x(&d, &r)?;
    Ok(FamilyInstance { m, w, oa, r, d, x })
}

/// The six block identities behind `XX^T` and `|X||X|^T`, with `c = 9^m`:
/// `RR^T = 9cI`, `DD^T = 9cI - J`, `RD^T = 0`, `|R||R|^T = 5cI + 4cJ`,
/// `|D||D|^T = 5cI + (4c-1)J`, `|R||D|^T = 4cJ`.
pub fn verify_lemma33(inst: &FamilyInstance) -> Result<Report> {
    let c = 9i64.pow(inst.m);
    let (r, d) = (&inst.r, &inst.d);
    let (rb, db) = (abs_entrywise(r)?, abs_entrywise(d)?);
    let mut rep = Report::new(format!("block identities (m={})", inst.m));
    rep.push(
        format!("(i) RR^T = {}I", 9 * c),
        product_matches_affine(r, r, 9 * c, 0)?,
    );
    rep.push(
        format!("(ii) DD^T = {}I - J", 9 * c),
        product_matches_affine(d, d, 9 * c, -1)?,
    );
    rep.push("(iii) RD^T = DR^T = 0", product_matches_affine(r, d, 0, 0)?);
    rep.push(
        format!("(iv) |R||R|^T = {}I + {}J", 5 * c, 4 * c),
        product_matches_affine(&rb, &rb, 5 * c, 4 * c)?,
    );
    rep.push(
        format!("(v) |D||D|^T = {}I + {}J", 5 * c, 4 * c - 1),
        product_matches_affine(&db, &db, 5 * c, 4 * c - 1)?,
    );
    rep.push(
        format!("(vi) |R||D|^T = {}J", 4 * c),
        product_matches_affine(&rb, &db, 0, 4 * c)?,
    );
    Ok(rep)
}

/// Certificate of `X` itself, titled `BW(v,k,λ)`.
pub fn verify_theorem(inst: &FamilyInstance) -> Result<Report> {
    let (_, (v, k, lambda)) = parameters(inst.m);
    let x = &inst.x;
    let mut rep = Report::new(format!("BW({v},{k},{lambda})"));
    rep.push(format!("order {v}"), x.shape() == (v, v));
    if x.shape() != (v, v) {
        return Ok(rep);
    }
    let top = 9usize.pow(inst.m + 1);
    let first_col = (0..v).all(|i| x.get(i, 0) == i8::from(i < top));
    rep.push("first column j over 0", first_col);
    let (k, l) = (k as i64, lambda as i64);
    rep.push(format!("XX^T = {k}I"), product_matches_affine(x, x, k, 0)?);
    let xb = abs_entrywise(x)?;
    rep.push(
        format!("|X||X|^T = {}I + {l}J", k - l),
        product_matches_affine(&xb, &xb, k - l, l)?,
    );
    let cert = verify_bgw(&group_from_signed(x)?, v, k as u64, lambda)?;
    rep.push_detail("BGW certificate over C_2", cert.passed(), cert.to_string());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::classical_bgw;
    use crate::exactmat::{gram, matches_affine};
    use crate::groupmat::layers;

    #[test]
    fn parameter_table() {
        assert_eq!(parameters(1), ((10, 9, 8), (181, 81, 36)));
        assert_eq!(parameters(2), ((91, 81, 72), (1639, 729, 324)));
        let (_, (v, k, l)) = parameters(1);
        assert_eq!(l * (v as u64 - 1), k * (k - 1));
    }

    #[test]
    fn degenerate_r_is_u() {
        let s = seed_matrices();
        let w = CyclicGroupMatrix::new(1, 1, 4, vec![Cell::Exp(0)]).unwrap();
        assert_eq!(build_r(&w, &s).unwrap(), s.u);
        let w = CyclicGroupMatrix::new(1, 1, 4, vec![Cell::Exp(1)]).unwrap();
        assert_eq!(build_r(&w, &s).unwrap(), s.v.neg().unwrap());
    }

    #[test]
    fn overlapping_layers_are_rejected() {
        let s = seed_matrices();
        let i = SignedMatrix::identity(2);
        let z = SignedMatrix::zeros(2, 2);
        let ls = [i.clone(), i, z.clone(), z];
        assert!(matches!(
            build_r_from_layers(&ls, &s),
            Err(Error::LayerOverlap { row: 0, col: 0 })
        ));
    }

    #[test]
    fn layer_sum_matches_blockwise_build() {
        let s = seed_matrices();
        let w = projective_bgw(9, 1, 4).unwrap();
        assert_eq!(
            build_r_from_layers(&layers(&w), &s).unwrap(),
            build_r(&w, &s).unwrap()
        );
    }

    #[test]
    fn level_one() {
        let inst = build_x(1).unwrap();
        assert_eq!(inst.r.shape(), (100, 180));
        assert_eq!(inst.d.shape(), (81, 180));
        assert_eq!(inst.x.shape(), (181, 181));
        assert!(inst.d.row_weights().iter().all(|&w| w == 80));
        let lemma = verify_lemma33(&inst).unwrap();
        assert!(lemma.passed(), "{lemma}");
        let thm = verify_theorem(&inst).unwrap();
        assert!(thm.passed(), "{thm}");
        assert_eq!(thm.verdict_line(), "BW(181,81,36): PASS");
    }

    #[test]
    fn trace_variant_breaks_orthogonality() {
        // Still a BGW, but W W^T is not real, so R R^T != 81 I.
        let s = seed_matrices();
        let r = build_r(&classical_bgw(9, 1, 4).unwrap(), &s).unwrap();
        assert!(!matches_affine(&gram(&r).unwrap(), 81, 0));
        let r = build_r(&projective_bgw(9, 1, 4).unwrap(), &s).unwrap();
        assert!(matches_affine(&gram(&r).unwrap(), 81, 0));
    }

    #[test]
    fn negating_a_row_keeps_the_products() {
        let inst = build_x(1).unwrap();
        let v = inst.x.rows();
        for row in [0, 80, 81, 180] {
            let mut data = inst.x.clone().into_vec();
            data[row * v..(row + 1) * v]
                .iter_mut()
                .for_each(|e| *e = -*e);
            let y = SignedMatrix::new(v, v, data).unwrap();
            assert!(product_matches_affine(&y, &y, 81, 0).unwrap());
            let yb = abs_entrywise(&y).unwrap();
            assert!(product_matches_affine(&yb, &yb, 45, 36).unwrap());
        }
    }

    #[test]
    fn level_bounds() {
        assert!(build_x(0).is_err());
        assert!(build_x(4).is_err());
        let s = seed_matrices();
        assert!(build_d(&build_oa(3, 2).unwrap(), &s).is_err());
        let w = CyclicGroupMatrix::new(1, 1, 2, vec![Cell::Exp(0)]).unwrap();
        assert!(build_r(&w, &s).is_err());
    }
}
