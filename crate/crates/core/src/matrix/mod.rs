// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices and the handful of linear-algebra routines the
//! rest of the crate is built on.
//!
//! Everything here is sized for the problems at hand (9×9 Choi matrices,
//! at most a few dozen rows elsewhere). Storage is row-major.

mod eigen;
mod expm;
pub mod random;
mod svd;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, is_psd, min_eigenvalue, psd_threshold};
pub use expm::expm;
pub use svd::{numerical_rank, singular_values};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Default PSD tolerance, relative to `max(1, ‖M‖_max)`.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;
/// Default relative tolerance for [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// Wire format: `{"rows": m, "cols": n, "re": [...], "im": [...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<CMat> for MatrixJson {
    fn from(m: CMat) -> Self {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            re: m.data.iter().map(|z| z.re).collect(),
            im: m.data.iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for CMat {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.re.len() != j.im.len() {
            return Err(Error::Parse(format!(
                "re has {} entries but im has {}",
                j.re.len(),
                j.im.len()
            )));
        }
        let data =
            j.re.into_iter()
                .zip(j.im)
                .map(|(re, im)| c(re, im))
                .collect();
        CMat::from_vec(j.rows, j.cols, data)
    }
}

impl CMat {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::size(format!("empty shape {rows}x{cols}")));
        }
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::size(format!("shape {rows}x{cols} overflows")))?;
        if data.len() != len {
            return Err(Error::size(format!(
                "{rows}x{cols} matrix needs {len} entries, got {}",
                data.len()
            )));
        }
        if let Some(idx) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: idx / cols,
                col: idx % cols,
            });
        }
        Ok(CMat { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| r(x)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { r(entries[i]) } else { ZERO })
    }

    /// Matrix unit `E_jk` (zero-based indices) of size `n`.
    pub fn unit(n: usize, j: usize, k: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(j, k)] = ONE;
        m
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::size(format!(
                "{what}: expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(r(s))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus, `‖M‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of `self - other`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "max_abs_diff: shape mismatch"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Induced 1-norm (max column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M - M*|` entrywise.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && (&self.adjoint() * self).max_abs_diff(&CMat::identity(self.rows)) <= tol
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Copies the `n×n` block at block position `(bj, bk)`.
    pub fn block(&self, bj: usize, bk: usize, n: usize) -> Self {
        Self::from_fn(n, n, |p, q| self[(bj * n + p, bk * n + q)])
    }

    /// Assembles a square block matrix from a row-major grid of equal-size
    /// square blocks.
    pub fn from_blocks(grid: &[Vec<CMat>]) -> Result<Self> {
        let m = grid.len();
        if m == 0 || grid.iter().any(|row| row.len() != m) {
            return Err(Error::size("block grid must be square and non-empty"));
        }
        let n = grid[0][0].rows;
        if grid.iter().flatten().any(|b| b.rows != n || b.cols != n) {
            return Err(Error::size("all blocks must be square with equal size"));
        }
        Ok(Self::from_fn(m * n, m * n, |i, j| {
            grid[i / n][j / n][(i % n, j % n)]
        }))
    }

    /// Vectorization in row-major order (`vec(X)[p*n + q] = X[p, q]`).
    pub fn vec_row_major(&self) -> Vec<C64> {
        self.data.clone()
    }

    pub fn matmul(&self, rhs: &CMat) -> Result<CMat> {
        if self.cols != rhs.rows {
            return Err(Error::size(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                if z.im == 0.0 {
                    write!(f, "{:>10.4} ", z.re)?;
                } else {
                    write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;

    /// Panics on shape mismatch; use [`CMat::matmul`] for a checked product.
    fn mul(self, rhs: &CMat) -> CMat {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &CMat {
    type Output = CMat;

    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "add: shape mismatch"
        );
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;

    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "sub: shape mismatch"
        );
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Subsystem dimensions of `C^m ⊗ C^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub m: usize,
    pub n: usize,
}

impl BipartiteDims {
    pub const QUTRITS: BipartiteDims = BipartiteDims { m: 3, n: 3 };

    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::size("subsystem dimensions must be positive"));
        }
        Ok(BipartiteDims { m, n })
    }

    pub fn total(&self) -> usize {
        self.m * self.n
    }
}

/// Kronecker product: block `(j, k)` of the result is `A[j, k] · B`.
pub fn kron(a: &CMat, b: &CMat) -> Result<CMat> {
    let rows = a
        .rows
        .checked_mul(b.rows)
        .ok_or_else(|| Error::size("kron: row count overflows"))?;
    let cols = a
        .cols
        .checked_mul(b.cols)
        .ok_or_else(|| Error::size("kron: column count overflows"))?;
    rows.checked_mul(cols)
        .ok_or_else(|| Error::size("kron: entry count overflows"))?;
    Ok(CMat::from_fn(rows, cols, |i, j| {
        a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
    }))
}

/// Partial transpose on the second factor: each `n×n` block of the `m×m`
/// block structure is transposed in place.
pub fn partial_transpose(mat: &CMat, dims: BipartiteDims) -> Result<CMat> {
    let side = dims.total();
    if mat.rows != side || mat.cols != side {
        return Err(Error::size(format!(
            "partial transpose over {}x{} needs a {side}x{side} matrix, got {}x{}",
            dims.m, dims.n, mat.rows, mat.cols
        )));
    }
    let n = dims.n;
    Ok(CMat::from_fn(side, side, |i, j| {
        let (bj, p) = (i / n, i % n);
        let (bk, q) = (j / n, j % n);
        mat[(bj * n + q, bk * n + p)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_vec_rejects_bad_input() {
        assert!(matches!(
            CMat::from_vec(2, 2, vec![ONE; 3]),
            Err(Error::Size(_))
        ));
        assert!(matches!(
            CMat::from_vec(1, 2, vec![ONE, c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(CMat::from_vec(0, 3, vec![]).is_err());
    }

    #[test]
    fn kron_identities() {
        let k = kron(&CMat::identity(2), &CMat::identity(3)).unwrap();
        assert_eq!(k, CMat::identity(6));
    }

    #[test]
    fn kron_elementary() {
        // E_12 ⊗ E_21 (one-based) has its single 1 at row 1, column 2 (zero-based).
        let k = kron(&CMat::unit(2, 0, 1), &CMat::unit(2, 1, 0)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if (i, j) == (1, 2) { ONE } else { ZERO };
                assert_eq!(k[(i, j)], want, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn partial_transpose_of_identity() {
        let pt = partial_transpose(&CMat::identity(9), BipartiteDims::QUTRITS).unwrap();
        assert_eq!(pt, CMat::identity(9));
    }

    #[test]
    fn partial_transpose_size_error() {
        let err = partial_transpose(&CMat::identity(8), BipartiteDims::QUTRITS).unwrap_err();
        assert!(matches!(err, Error::Size(_)));
    }

    #[test]
    fn json_wire_format() {
        let m = CMat::from_vec(1, 2, vec![c(1.0, -2.0), c(0.5, 0.0)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"re":[1.0,0.5],"im":[-2.0,0.0]}"#);
        let back: CMat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<CMat>(r#"{"rows":2,"cols":2,"re":[1],"im":[1]}"#).is_err());
    }

    #[test]
    fn block_roundtrip() {
        let m = CMat::from_fn(6, 6, |i, j| c(i as f64, j as f64));
        let grid: Vec<Vec<CMat>> = (0..3)
            .map(|bj| (0..3).map(|bk| m.block(bj, bk, 2)).collect())
            .collect();
        assert_eq!(CMat::from_blocks(&grid).unwrap(), m);
    }
}
