//! Dense complex matrices.
//!
//! [`ComplexMatrix`] is a square, finite-valued wrapper over
//! `nalgebra::DMatrix<Complex64>`. Products are evaluated through real
//! gemms on the split real/imaginary parts, skipping parts that are
//! identically zero, which keeps the real-symmetric grid problems cheap.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexVector = DVector<C64>;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<C64>,
}

impl ComplexMatrix {
    /// Wraps `inner`, rejecting non-square, empty or non-finite input.
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::NotSquare {
                rows: inner.nrows(),
                cols: inner.ncols(),
            });
        }
        if inner.nrows() == 0 {
            return Err(Error::Empty);
        }
        for j in 0..inner.ncols() {
            for i in 0..inner.nrows() {
                let z = inner[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { inner })
    }

    /// Builds a matrix from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: im.len(),
            });
        }
        for row in re.iter().chain(im) {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| C64::new(re[i][j], im[i][j])))
    }

    /// Row-major rows of complex entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real(real: &DMatrix<f64>) -> Result<Self> {
        Self::new(real.map(|x| C64::new(x, 0.0)))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: DMatrix::zeros(n, n),
        }
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let n = values.len();
        Self {
            inner: DMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { C64::new(0.0, 0.0) }),
        }
    }

    // Internal constructor for results of arithmetic on already-valid matrices.
    pub(crate) fn from_inner_unchecked(inner: DMatrix<C64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        Self { inner }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.inner
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_inner_unchecked(self.inner.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self::from_inner_unchecked(self.inner.transpose())
    }

    pub fn conj(&self) -> Self {
        Self::from_inner_unchecked(self.inner.map(|z| z.conj()))
    }

    pub fn is_real(&self) -> bool {
        self.inner.iter().all(|z| z.im == 0.0)
    }

    /// True when every entry off the three central diagonals is exactly zero.
    pub fn is_tridiagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i.abs_diff(j) <= 1 || self.inner[(i, j)] == C64::new(0.0, 0.0)))
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude of `self - I`.
    pub fn identity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for j in 0..n {
            for i in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.inner[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self::from_inner_unchecked(complex_gemm(&self.inner, &other.inner))
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        &self.inner * v
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::from_inner_unchecked(self.inner.map(|z| z * factor))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_inner_unchecked(&self.inner - &other.inner)
    }

    /// Row-major real parts.
    pub fn re_rows(&self) -> Vec<Vec<f64>> {
        self.rows_by(|z| z.re)
    }

    /// Row-major imaginary parts.
    pub fn im_rows(&self) -> Vec<Vec<f64>> {
        self.rows_by(|z| z.im)
    }

    fn rows_by(&self, f: impl Fn(C64) -> f64) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| f(self.inner[(i, j)])).collect())
            .collect()
    }
}

fn split(m: &DMatrix<C64>) -> (DMatrix<f64>, Option<DMatrix<f64>>) {
    let re = m.map(|z| z.re);
    let im = if m.iter().any(|z| z.im != 0.0) {
        Some(m.map(|z| z.im))
    } else {
        None
    };
    (re, im)
}

/// Complex product of rectangular matrices via real gemms.
pub(crate) fn complex_gemm(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions differ");
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let mut re = &ar * &br;
    let im = match (&ai, &bi) {
        (None, None) => None,
        (Some(ai), None) => Some(ai * &br),
        (None, Some(bi)) => Some(&ar * bi),
        (Some(ai), Some(bi)) => {
            re -= ai * bi;
            Some(&ar * bi + ai * &br)
        }
    };
    match im {
        Some(im) => re.zip_map(&im, C64::new),
        None => re.map(|x| C64::new(x, 0.0)),
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &ComplexVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Element-wise complex conjugate.
pub fn vec_conj(v: &ComplexVector) -> ComplexVector {
    v.map(|z| z.conj())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        let rect = DMatrix::<C64>::zeros(2, 3);
        assert_eq!(ComplexMatrix::new(rect), Err(Error::NotSquare { rows: 2, cols: 3 }));
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(1, 0)] = c(f64::NAN, 0.0);
        assert_eq!(ComplexMatrix::new(m), Err(Error::NonFinite { row: 1, col: 0 }));
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 1)] = c(0.0, f64::INFINITY);
        assert_eq!(ComplexMatrix::new(m), Err(Error::NonFinite { row: 0, col: 1 }));
    }

    #[test]
    fn split_gemm_matches_naive_product() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(0.5, -1.0), c(0.0, 0.0)],
            vec![c(-3.0, 0.0), c(2.0, 2.0), c(1.0, -1.0)],
            vec![c(0.0, 1.0), c(4.0, 0.0), c(-1.0, 0.5)],
        ])
        .unwrap();
        let b = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(-1.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)],
            vec![c(0.5, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        for (x, y) in [(&a, &b), (&b, &a), (&a, &a), (&b, &b)] {
            let naive = x.inner() * y.inner();
            assert!(x.matmul(y).max_abs_diff(&ComplexMatrix::new(naive).unwrap()) < 1e-13);
        }
    }

    #[test]
    fn tridiagonal_and_real_detection() {
        let m = ComplexMatrix::from_parts(
            &[vec![1.0, 2.0, 0.0], vec![2.0, 1.0, 3.0], vec![0.0, 3.0, 1.0]],
            &[vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]],
        )
        .unwrap();
        assert!(m.is_real());
        assert!(m.is_tridiagonal());
        let mut inner = m.into_inner();
        inner[(0, 2)] = c(0.0, 1e-300);
        let m = ComplexMatrix::new(inner).unwrap();
        assert!(!m.is_real());
        assert!(!m.is_tridiagonal());
    }
}
