//! Dense row-major integer matrices with exact, overflow-checked products.
//!
//! Design matrices (entries in {-1, 0, 1}) are stored as [`SignedMatrix`] with one
//! byte per entry; products are returned as [`IntMatrix`] with 64-bit entries.
//! Every product first bounds `cols * max|a| * max|b|`; if the bound fits the
//! accumulator the fast path is taken, otherwise each term is checked and
//! overflow is reported as an error.

use std::fmt;

use crate::error::{Error, Result};

/// Cell type of a [`Matrix`].
pub trait Entry: Copy + Default + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    const ZERO: Self;
    const ONE: Self;

    fn to_i64(self) -> i64;

    fn from_i64(v: i64) -> Option<Self>;

    /// Dot product of two equal-length slices. The caller guarantees that
    /// `len * max|a| * max|b| <= i32::MAX`.
    fn dot_small(a: &[Self], b: &[Self]) -> i64 {
        Self::dot_wide(a, b)
    }

    /// Dot product; the caller guarantees the bound fits in `i64`.
    fn dot_wide(a: &[Self], b: &[Self]) -> i64 {
        a.iter().zip(b).fold(0i64, |acc, (&x, &y)| {
            acc.wrapping_add(x.to_i64().wrapping_mul(y.to_i64()))
        })
    }
}

impl Entry for i8 {
    const ZERO: Self = 0;
    const ONE: Self = 1;

    #[inline]
    fn to_i64(self) -> i64 {
        i64::from(self)
    }

    #[inline]
    fn from_i64(v: i64) -> Option<Self> {
        i8::try_from(v).ok()
    }

    #[inline]
    fn dot_small(a: &[i8], b: &[i8]) -> i64 {
        // i32 lanes vectorize far better than i64 ones.
        let acc = a.iter().zip(b).fold(0i32, |acc, (&x, &y)| {
            acc.wrapping_add(i32::from(x).wrapping_mul(i32::from(y)))
        });
        i64::from(acc)
    }
}

impl Entry for i64 {
    const ZERO: Self = 0;
    const ONE: Self = 1;

    #[inline]
    fn to_i64(self) -> i64 {
        self
    }

    #[inline]
    fn from_i64(v: i64) -> Option<Self> {
        Some(v)
    }
}

/// Coarse classification of a matrix by the values it contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// Entries in {0, 1}.
    Binary,
    /// Entries in {-1, 0, 1}, at least one -1.
    SignedWeighing,
    General,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Design matrices: one signed byte per entry.
pub type SignedMatrix = Matrix<i8>;
/// Product results.
pub type IntMatrix = Matrix<i64>;

impl<T: Entry> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            let row: Vec<i64> = self.row(r).iter().take(32).map(|x| x.to_i64()).collect();
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

impl<T: Entry> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        let len = rows
            .checked_mul(cols)
            .ok_or(Error::Overflow("matrix size"))?;
        if data.len() != len {
            return Err(Error::InvalidParameter(format!(
                "{rows}x{cols} matrix needs {len} entries, got {}",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::ONE;
        }
        m
    }

    /// The all-one matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::ONE; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::InvalidParameter(format!(
                "row {bad} has {} entries, expected {cols}",
                rows[bad].len()
            )));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.data[r * self.cols + c]);
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<U: Entry>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn widen(&self) -> IntMatrix {
        self.map(Entry::to_i64)
    }

    /// Converts to a narrower cell type, failing if any entry does not fit.
    pub fn narrow<U: Entry>(&self) -> Result<Matrix<U>> {
        let data = self
            .data
            .iter()
            .map(|&x| U::from_i64(x.to_i64()).ok_or(Error::Overflow("narrow")))
            .collect::<Result<Vec<U>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn max_abs(&self) -> u64 {
        self.data
            .iter()
            .map(|x| x.to_i64().unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|x| matches!(x.to_i64(), 0 | 1))
    }

    pub fn is_signed_weighing(&self) -> bool {
        self.data.iter().all(|x| matches!(x.to_i64(), -1..=1))
    }

    pub fn kind(&self) -> MatrixKind {
        if self.is_binary() {
            MatrixKind::Binary
        } else if self.is_signed_weighing() {
            MatrixKind::SignedWeighing
        } else {
            MatrixKind::General
        }
    }

    /// Number of nonzero entries in each row.
    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|r| self.row(r).iter().filter(|&&x| x != T::ZERO).count())
            .collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for r in 0..self.rows {
            for (c, &x) in self.row(r).iter().enumerate() {
                if x != T::ZERO {
                    w[c] += 1;
                }
            }
        }
        w
    }

    fn zip_checked(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(i64, i64) -> Option<i64>,
    ) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| {
                f(a.to_i64(), b.to_i64())
                    .and_then(T::from_i64)
                    .ok_or(Error::Overflow(op))
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_checked(other, "add", i64::checked_add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_checked(other, "sub", i64::checked_sub)
    }

    pub fn scale(&self, c: i64) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|&x| {
                x.to_i64()
                    .checked_mul(c)
                    .and_then(T::from_i64)
                    .ok_or(Error::Overflow("scale"))
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn neg(&self) -> Result<Self> {
        self.scale(-1)
    }

    /// Copies the `rows x cols` block starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Self> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::DimensionMismatch {
                op: "submatrix",
                left: self.shape(),
                right: (r0 + rows, c0 + cols),
            });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in r0..r0 + rows {
            data.extend_from_slice(&self.row(r)[c0..c0 + cols]);
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Horizontal concatenation `[A | B | ...]`.
    pub fn hcat(parts: &[&Self]) -> Result<Self> {
        let rows = parts.first().map_or(0, |m| m.rows);
        if let Some(bad) = parts.iter().find(|m| m.rows != rows) {
            return Err(Error::DimensionMismatch {
                op: "hcat",
                left: parts[0].shape(),
                right: bad.shape(),
            });
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for m in parts {
                data.extend_from_slice(m.row(r));
            }
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Vertical concatenation.
    pub fn vcat(parts: &[&Self]) -> Result<Self> {
        let cols = parts.first().map_or(0, |m| m.cols);
        if let Some(bad) = parts.iter().find(|m| m.cols != cols) {
            return Err(Error::DimensionMismatch {
                op: "vcat",
                left: parts[0].shape(),
                right: bad.shape(),
            });
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in parts {
            data.extend_from_slice(&m.data);
        }
        Ok(Matrix { rows, cols, data })
    }

    /// `out[i][j] = self[row_perm[i]][col_perm[j]]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        if row_perm.len() != self.rows || col_perm.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "permuted",
                left: self.shape(),
                right: (row_perm.len(), col_perm.len()),
            });
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |r, c| {
            self.get(row_perm[r], col_perm[c])
        }))
    }
}

pub fn transpose<T: Entry>(m: &Matrix<T>) -> Matrix<T> {
    m.transpose()
}

/// Bound on every partial sum of a length-`len` dot product.
fn dot_bound(len: usize, a: u64, b: u64) -> u128 {
    len as u128 * u128::from(a) * u128::from(b)
}

#[derive(Clone, Copy)]
enum Kernel {
    Small,
    Wide,
    Checked,
}

fn pick_kernel<T: Entry>(a: &Matrix<T>, b: &Matrix<T>) -> Kernel {
    let bound = dot_bound(a.cols, a.max_abs(), b.max_abs());
    if bound <= i32::MAX as u128 {
        Kernel::Small
    } else if bound <= i64::MAX as u128 {
        Kernel::Wide
    } else {
        Kernel::Checked
    }
}

fn dot_checked<T: Entry>(a: &[T], b: &[T]) -> Result<i64> {
    a.iter().zip(b).try_fold(0i64, |acc, (&x, &y)| {
        x.to_i64()
            .checked_mul(y.to_i64())
            .and_then(|p| acc.checked_add(p))
            .ok_or(Error::Overflow("matmul accumulator"))
    })
}

#[inline]
fn dot_with<T: Entry>(kernel: Kernel, a: &[T], b: &[T]) -> Result<i64> {
    match kernel {
        Kernel::Small => Ok(T::dot_small(a, b)),
        Kernel::Wide => Ok(T::dot_wide(a, b)),
        Kernel::Checked => dot_checked(a, b),
    }
}

/// Rows packed as two bit planes, `+1` and `-1`, 64 columns per word.
struct SignPlanes {
    words: usize,
    pos: Vec<u64>,
    neg: Vec<u64>,
    has_neg: bool,
}

impl SignPlanes {
    /// `None` unless every entry is in {-1, 0, 1}.
    fn pack<T: Entry>(m: &Matrix<T>) -> Option<Self> {
        let words = m.cols.div_ceil(64);
        let mut pos = vec![0u64; m.rows * words];
        let mut neg = vec![0u64; m.rows * words];
        for r in 0..m.rows {
            for (c, &x) in m.row(r).iter().enumerate() {
                let bit = 1u64 << (c % 64);
                match x.to_i64() {
                    0 => {}
                    1 => pos[r * words + c / 64] |= bit,
                    -1 => neg[r * words + c / 64] |= bit,
                    _ => return None,
                }
            }
        }
        let has_neg = neg.iter().any(|&w| w != 0);
        Some(SignPlanes {
            words,
            pos,
            neg,
            has_neg,
        })
    }

    #[inline]
    fn planes(&self, r: usize) -> (&[u64], &[u64]) {
        let range = r * self.words..(r + 1) * self.words;
        (&self.pos[range.clone()], &self.neg[range])
    }
}

#[inline]
fn and_count(a: &[u64], b: &[u64]) -> i64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| i64::from((x & y).count_ones()))
        .sum()
}

/// How row dot products of a particular pair of operands are evaluated.
enum Plan<'a, T> {
    Bits(SignPlanes, SignPlanes),
    Ints(Kernel, &'a Matrix<T>, &'a Matrix<T>),
}

impl<'a, T: Entry> Plan<'a, T> {
    fn new(a: &'a Matrix<T>, b: &'a Matrix<T>) -> Self {
        // Packing pays for itself once a row spans a few words.
        if a.cols >= 128 {
            if let (Some(pa), Some(pb)) = (SignPlanes::pack(a), SignPlanes::pack(b)) {
                return Plan::Bits(pa, pb);
            }
        }
        Plan::Ints(pick_kernel(a, b), a, b)
    }

    #[inline]
    fn dot(&self, i: usize, j: usize) -> Result<i64> {
        match self {
            Plan::Bits(pa, pb) => {
                let (ap, an) = pa.planes(i);
                let (bp, bn) = pb.planes(j);
                let mut d = and_count(ap, bp);
                if pa.has_neg && pb.has_neg {
                    d += and_count(an, bn);
                }
                if pb.has_neg {
                    d -= and_count(ap, bn);
                }
                if pa.has_neg {
                    d -= and_count(an, bp);
                }
                Ok(d)
            }
            Plan::Ints(kernel, a, b) => dot_with(*kernel, a.row(i), b.row(j)),
        }
    }
}

/// `A * B^T`: both operands are read row-wise, so this is the primitive product.
pub fn matmul_transposed<T: Entry>(a: &Matrix<T>, b: &Matrix<T>) -> Result<IntMatrix> {
    if a.cols != b.cols {
        return Err(Error::DimensionMismatch {
            op: "matmul_transposed",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let plan = Plan::new(a, b);
    let mut data = Vec::with_capacity(a.rows * b.rows);
    for i in 0..a.rows {
        for j in 0..b.rows {
            data.push(plan.dot(i, j)?);
        }
    }
    Ok(Matrix {
        rows: a.rows,
        cols: b.rows,
        data,
    })
}

/// Exact product `A * B`.
pub fn matmul<T: Entry>(a: &Matrix<T>, b: &Matrix<T>) -> Result<IntMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "matmul",
            left: a.shape(),
            right: b.shape(),
        });
    }
    matmul_transposed(a, &b.transpose())
}

/// `A * A^T`.
pub fn gram<T: Entry>(a: &Matrix<T>) -> Result<IntMatrix> {
    matmul_transposed(a, a)
}

/// Checks `A * B^T == diag * I + all * J` without materializing the product,
/// stopping at the first mismatch. Non-square targets only admit `diag == 0`.
pub fn product_matches_affine<T: Entry>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    diag: i64,
    all: i64,
) -> Result<bool> {
    if a.cols != b.cols {
        return Err(Error::DimensionMismatch {
            op: "product_matches_affine",
            left: a.shape(),
            right: b.shape(),
        });
    }
    if diag != 0 && a.rows != b.rows {
        return Ok(false);
    }
    let plan = Plan::new(a, b);
    for i in 0..a.rows {
        for j in 0..b.rows {
            let want = if i == j { diag + all } else { all };
            if plan.dot(i, j)? != want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Kronecker product: block `(i, j)` is `A[i][j] * B`.
pub fn kron<T: Entry>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    let rows = a
        .rows
        .checked_mul(b.rows)
        .ok_or(Error::Overflow("kron rows"))?;
    let cols = a
        .cols
        .checked_mul(b.cols)
        .ok_or(Error::Overflow("kron cols"))?;
    rows.checked_mul(cols).ok_or(Error::Overflow("kron size"))?;
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..a.rows {
        for r in 0..b.rows {
            let brow = b.row(r);
            for j in 0..a.cols {
                let x = a.get(i, j).to_i64();
                for &y in brow {
                    let v = x
                        .checked_mul(y.to_i64())
                        .and_then(T::from_i64)
                        .ok_or(Error::Overflow("kron entry"))?;
                    data.push(v);
                }
            }
        }
    }
    Ok(Matrix { rows, cols, data })
}

/// True iff `m == a*I + b*J`. Rectangular matrices only match with `a == 0`.
pub fn matches_affine<T: Entry>(m: &Matrix<T>, a: i64, b: i64) -> bool {
    if a != 0 && !m.is_square() {
        return false;
    }
    (0..m.rows).all(|r| {
        m.row(r).iter().enumerate().all(|(c, &x)| {
            let want = if r == c { a + b } else { b };
            x.to_i64() == want
        })
    })
}

/// Entrywise absolute value, the "barred" matrix.
pub fn abs_entrywise<T: Entry>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let data = m
        .data
        .iter()
        .map(|&x| {
            x.to_i64()
                .checked_abs()
                .and_then(T::from_i64)
                .ok_or(Error::Overflow("abs"))
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(Matrix {
        rows: m.rows,
        cols: m.cols,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sm(rows: &[&[i8]]) -> SignedMatrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_times_matrix() {
        let m = sm(&[&[1, -1, 0], &[0, 1, 1]]);
        let p = matmul(&SignedMatrix::identity(2), &m).unwrap();
        assert_eq!(p, m.widen());
    }

    #[test]
    fn ones_squared() {
        let j = SignedMatrix::ones(2, 2);
        assert_eq!(
            matmul(&j, &j).unwrap(),
            IntMatrix::ones(2, 2).scale(2).unwrap()
        );
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = SignedMatrix::zeros(2, 3);
        assert!(matches!(
            matmul(&a, &a),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn overflow_is_reported_not_wrapped() {
        let big = IntMatrix::new(1, 2, vec![i64::MAX, i64::MAX]).unwrap();
        let ones = IntMatrix::new(2, 1, vec![1, 1]).unwrap();
        assert!(matches!(matmul(&big, &ones), Err(Error::Overflow(_))));
        // Within i64 but not i32: must still be exact.
        let a = IntMatrix::new(1, 2, vec![1 << 40, 1 << 40]).unwrap();
        let p = matmul(&a, &ones).unwrap();
        assert_eq!(p.get(0, 0), 1 << 41);
    }

    #[test]
    fn kron_examples() {
        let m = sm(&[&[1, -1], &[0, 1]]);
        assert_eq!(kron(&SignedMatrix::identity(1), &m).unwrap(), m);
        let swap = sm(&[&[0, 1], &[1, 0]]);
        let k = kron(&swap, &SignedMatrix::identity(2)).unwrap();
        let want = sm(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        assert_eq!(k, want);
        let over = SignedMatrix::new(1, 1, vec![-128]).unwrap();
        assert!(kron(&over, &SignedMatrix::new(1, 1, vec![-1]).unwrap()).is_err());
    }

    #[test]
    fn affine_matching() {
        assert!(matches_affine(&SignedMatrix::zeros(3, 3), 0, 0));
        assert!(matches_affine(&SignedMatrix::zeros(2, 5), 0, 0));
        assert!(!matches_affine(&SignedMatrix::zeros(2, 5), 1, 0));
        let m = IntMatrix::from_fn(3, 3, |r, c| if r == c { 8 } else { -1 });
        assert!(matches_affine(&m, 9, -1));
        assert!(!matches_affine(&m, 9, 0));
    }

    #[test]
    fn abs_of_negated_identity() {
        let m = SignedMatrix::identity(3).neg().unwrap();
        let a = abs_entrywise(&m).unwrap();
        assert_eq!(a, SignedMatrix::identity(3));
        assert_eq!(a.kind(), MatrixKind::Binary);
        assert_eq!(m.kind(), MatrixKind::SignedWeighing);
    }

    #[test]
    fn streaming_affine_check_agrees_with_materialized() {
        let m = sm(&[&[1, 1, 0], &[1, -1, 0], &[0, 0, 1]]);
        assert!(
            product_matches_affine(&m, &m, 0, 0).unwrap()
                == matches_affine(&gram(&m).unwrap(), 0, 0)
        );
        let h = sm(&[&[1, 1], &[1, -1]]);
        assert!(product_matches_affine(&h, &h, 2, 0).unwrap());
        assert!(!product_matches_affine(&h, &h, 2, 1).unwrap());
    }

    fn small_int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-5i64..=5, rows * cols)
            .prop_map(move |d| IntMatrix::new(rows, cols, d).unwrap())
    }

    fn signed_matrix(rows: usize, cols: usize) -> impl Strategy<Value = SignedMatrix> {
        proptest::collection::vec(-1i8..=1, rows * cols)
            .prop_map(move |d| SignedMatrix::new(rows, cols, d).unwrap())
    }

    proptest! {
        #[test]
        fn mixed_product_law(
            a in small_int_matrix(3, 3),
            b in small_int_matrix(3, 3),
            c in small_int_matrix(3, 3),
            d in small_int_matrix(3, 3),
        ) {
            let lhs = matmul(&kron(&a, &b).unwrap(), &kron(&c, &d).unwrap()).unwrap();
            let rhs = kron(&matmul(&a, &c).unwrap(), &matmul(&b, &d).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn associative_and_distributive(
            a in small_int_matrix(3, 4),
            b in small_int_matrix(4, 2),
            b2 in small_int_matrix(4, 2),
            c in small_int_matrix(2, 5),
        ) {
            let left = matmul(&matmul(&a, &b).unwrap(), &c).unwrap();
            let right = matmul(&a, &matmul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let dist = matmul(&a, &b.add(&b2).unwrap()).unwrap();
            let sum = matmul(&a, &b).unwrap().add(&matmul(&a, &b2).unwrap()).unwrap();
            prop_assert_eq!(dist, sum);
        }

        #[test]
        fn transpose_reverses_products(a in small_int_matrix(3, 4), b in small_int_matrix(4, 2)) {
            let lhs = matmul(&a, &b).unwrap().transpose();
            let rhs = matmul(&b.transpose(), &a.transpose()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn abs_commutes_with_kron(a in signed_matrix(2, 3), b in signed_matrix(3, 2)) {
            let lhs = abs_entrywise(&kron(&a, &b).unwrap()).unwrap();
            let rhs = kron(&abs_entrywise(&a).unwrap(), &abs_entrywise(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bit_kernel_matches_wide_kernel(a in signed_matrix(3, 200), b in signed_matrix(4, 200)) {
            let fast = matmul_transposed(&a, &b).unwrap();
            let wide = matmul_transposed(&a.widen().scale(2).unwrap(), &b.widen()).unwrap();
            prop_assert_eq!(fast.scale(2).unwrap(), wide);
            let bin = abs_entrywise(&a).unwrap();
            let fast = matmul_transposed(&bin, &b).unwrap();
            let wide = matmul_transposed(&bin.widen().scale(2).unwrap(), &b.widen()).unwrap();
            prop_assert_eq!(fast.scale(2).unwrap(), wide);
        }

        #[test]
        fn byte_kernel_matches_wide_kernel(a in signed_matrix(4, 7), b in signed_matrix(5, 7)) {
            let fast = matmul_transposed(&a, &b).unwrap();
            let wide = matmul_transposed(&a.widen(), &b.widen()).unwrap();
            prop_assert_eq!(fast, wide);
        }
    }
}
