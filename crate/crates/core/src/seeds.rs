//! The seed matrices `U`, `V` (10×18) and `Y` (9×18), their product
//! identities, and the two `BW(19,9,4)` assembled from them.
//!
//! `|U|` and `|V|` are complementary signed residual designs of a symmetric
//! (19,9,4) design and `|Y|` is the signed derived design shared by both.

use sha2::{Digest, Sha256};

use crate::dmfile::MatrixFile;
use crate::error::{Error, Result};
use crate::exactmat::{
    abs_entrywise, gram, matches_affine, matmul_transposed, IntMatrix, SignedMatrix,
};
use crate::groupmat::{group_from_signed, verify_bgw};
use crate::report::Report;

pub const SEED_U: &str = "#dm kind=signed rows=10 cols=18
000000000+++++++++
-00+0+++0000+0-+-0
0-0++00++000-+00+-
00-0+++0+0000-+-0+
++0-00+0++-0000+0-
0++0-0++00+-000-+0
+0+00-0++-0+0000-+
+0+++0-00+0-+-0000
++00++0-0-+00+-000
0+++0+00-0-+-0+000
";

pub const SEED_V: &str = "#dm kind=signed rows=10 cols=18
+++++++++000000000
0--0+000+-++0+000+
-0-00++00+-+00++00
--0+000+0++-+000+0
00+0--0+000+-++0+0
+00-0-00++00+-+00+
0+0--0+000+0++-+00
0+000+0--0+000+-++
00++00-0-00++00+-+
+000+0--0+000+0++-
";

pub const SEED_Y: &str = "#dm kind=signed rows=9 cols=18
000+0-+-00--0+000+
000-+00+--0-00++00
0000-+-0+--0+000+0
+-0000+0-00+0--0+0
0+-000-+0+00-0-00+
-0+0000-+0+0--0+00
+0-+-00000+000+0--
-+00+-00000++00-0-
0-+-0+000+000+0--0
";

/// SHA-256 of the canonical serializations of U, V and Y.
pub const SEED_CHECKSUMS: [&str; 3] = [
    "6438f6dd1b72ecc2e79a5d8efb5315f072a1f90d68102b16c3cf8b037c8b9462",
    "25b655a1d8b164a2e4767905da67cf7d41e0e15ff736f5fd6f2e8c15b3908f8e",
    "ab18dc12bd24d4035c516c291070b2431ac09b62ab83b0cf8a4e009ddc296c03",
];

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedTriple {
    pub u: SignedMatrix,
    pub v: SignedMatrix,
    pub y: SignedMatrix,
}

fn load(text: &str, checksum: &str) -> SignedMatrix {
    let m = MatrixFile::parse(text)
        .and_then(|f| f.to_signed())
        .expect("embedded seed parses");
    let canonical = MatrixFile::Signed(m.clone()).to_text();
    assert_eq!(
        sha256_hex(canonical.as_bytes()),
        checksum,
        "embedded seed checksum"
    );
    m
}

pub fn seed_matrices() -> SeedTriple {
    SeedTriple {
        u: load(SEED_U, SEED_CHECKSUMS[0]),
        v: load(SEED_V, SEED_CHECKSUMS[1]),
        y: load(SEED_Y, SEED_CHECKSUMS[2]),
    }
}

/// Half the column count of a candidate triple; the identities scale with it.
fn half_width(s: &SeedTriple) -> Result<i64> {
    let (ur, uc) = s.u.shape();
    let ok = uc % 2 == 0
        && (uc / 2) % 2 == 1
        && ur == uc / 2 + 1
        && s.v.shape() == (ur, uc)
        && s.y.shape() == (uc / 2, uc)
        && s.u.is_signed_weighing()
        && s.v.is_signed_weighing()
        && s.y.is_signed_weighing();
    if !ok {
        return Err(Error::InvalidParameter(format!(
            "seed shapes U {:?}, V {:?}, Y {:?} do not fit (s+1)x2s, (s+1)x2s, sx2s with s odd",
            s.u.shape(),
            s.v.shape(),
            s.y.shape()
        )));
    }
    Ok((uc / 2) as i64)
}

/// All product identities of a seed triple with half-width `s` (9 for the
/// shipped seeds): orthogonality `(i)-(iii)` and the design counts `(iv)-(v)`.
pub fn verify_seed_identities(s: &SeedTriple) -> Result<Report> {
    let w = half_width(s)?;
    let (hi, lo) = ((w + 1) / 2, (w - 1) / 2);
    let (ub, vb, yb) = (
        abs_entrywise(&s.u)?,
        abs_entrywise(&s.v)?,
        abs_entrywise(&s.y)?,
    );
    let p = |a: &SignedMatrix, b: &SignedMatrix| matmul_transposed(a, b);
    let is = |m: IntMatrix, a, b| matches_affine(&m, a, b);

    let mut r = Report::new("seed identities");
    r.push(
        format!("(i) UU^T = VV^T = {w}I"),
        is(gram(&s.u)?, w, 0) && is(gram(&s.v)?, w, 0),
    );
    r.push("(i) UV^T = VU^T", p(&s.u, &s.v)? == p(&s.v, &s.u)?);
    r.push(format!("(ii) YY^T = {w}I - J"), is(gram(&s.y)?, w, -1));
    r.push(
        "(iii) UY^T = VY^T = 0",
        is(p(&s.u, &s.y)?, 0, 0) && is(p(&s.v, &s.y)?, 0, 0),
    );
    r.push(
        format!("(iv) |U||U|^T = |V||V|^T = {hi}I + {lo}J"),
        is(gram(&ub)?, hi, lo) && is(gram(&vb)?, hi, lo),
    );
    r.push(
        format!("(iv) |U||V|^T = |V||U|^T = -{hi}I + {hi}J"),
        is(p(&ub, &vb)?, -hi, hi) && is(p(&vb, &ub)?, -hi, hi),
    );
    r.push(
        format!("(v) |Y||Y|^T = {hi}I + {}J", (w - 3) / 2),
        is(gram(&yb)?, hi, (w - 3) / 2),
    );
    r.push(
        format!("(v) |U||Y|^T = |V||Y|^T = {lo}J"),
        is(p(&ub, &yb)?, 0, lo) && is(p(&vb, &yb)?, 0, lo),
    );
    r.push(
        "|U| + |V| = J",
        ub.add(&vb)? == SignedMatrix::ones(s.u.rows(), s.u.cols()),
    );
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MathonVariant {
    U,
    V,
}

/// `[[1, Y], [0, S]]` with `S = U` or `V`, certified as `BW(2s+1, s, (s-1)/2)`.
pub fn assemble_mathon(s: &SeedTriple, which: MathonVariant) -> Result<SignedMatrix> {
    let w = half_width(s)? as usize;
    let bottom_block = match which {
        MathonVariant::U => &s.u,
        MathonVariant::V => &s.v,
    };
    let top = SignedMatrix::hcat(&[&SignedMatrix::ones(w, 1), &s.y])?;
    let bottom = SignedMatrix::hcat(&[&SignedMatrix::zeros(w + 1, 1), bottom_block])?;
    let m = SignedMatrix::vcat(&[&top, &bottom])?;
    let (v, k, lambda) = mathon_params(w);
    let cert = verify_bgw(&group_from_signed(&m)?, v, k, lambda)?;
    if !cert.passed() {
        return Err(Error::CertificateFailed(cert.to_string()));
    }
    Ok(m)
}

/// `(2s+1, s, (s-1)/2)`.
pub fn mathon_params(s: usize) -> (usize, u64, u64) {
    (2 * s + 1, s as u64, (s as u64 - 1) / 2)
}
