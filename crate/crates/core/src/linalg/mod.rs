//! Dense complex linear algebra for the small matrices this crate works with.
//!
//! Everything here is sized for dimensions up to [`MAX_DIM`]. The routines are
//! O(n³) textbook kernels: cyclic Jacobi for Hermitian eigenproblems, Householder
//! Hessenberg reduction followed by shifted QR for general spectra, and LU with
//! partial pivoting for determinants.

mod eigen;
mod hermitian;
mod lu;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

pub use eigen::{general_eigenvalues, ComplexSpectrum};
pub use hermitian::{exp_i_hermitian, hermitian_eig, psd_sqrt, HermitianEigen};

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 32;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix dimension {0} outside 1..={MAX_DIM}")]
    InvalidDimension(usize),
    #[error("expected {expected} entries for the requested shape, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e}, norm {norm:e})")]
    NotHermitian { asymmetry: f64, norm: f64 },
    #[error("eigenvalue {value:e} is below the positive-semidefinite clamp")]
    NegativeEigenvalue { value: f64 },
    #[error("{routine} failed to converge after {iterations} iterations on {matrix}")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
        matrix: SquareMatrix,
    },
    #[error("non-finite entry produced by {0}")]
    NonFinite(&'static str),
}

/// Dense row-major complex square matrix.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Result<Self, LinalgError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(LinalgError::InvalidDimension(dim));
        }
        Ok(Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(dim)?;
        for k in 0..dim {
            m[(k, k)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(LinalgError::InvalidDimension(dim));
        }
        if data.len() != dim * dim {
            return Err(LinalgError::ShapeMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let dim = rows.len();
        let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(LinalgError::ShapeMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Self::from_vec(dim, data)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(diag.len())?;
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self, LinalgError> {
        let diag: Vec<Complex64> = diag.iter().map(|&d| Complex64::new(d, 0.0)).collect();
        Self::from_diagonal(&diag)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|k| self[(k, k)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(brow) {
                    *d += a * b;
                }
            }
        }
        Ok(Self { dim: n, data: out })
    }

    /// `self^k` by binary powering; `k = 0` yields the identity.
    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::identity(self.dim).expect("dimension already validated");
        let mut base = self.clone();
        let mut e = k;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                result = if first {
                    first = false;
                    base.clone()
                } else {
                    result.matmul(&base).expect("same dimension")
                };
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base).expect("same dimension");
            }
        }
        result
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - self†`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Determinant by LU factorization with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        lu::determinant(self)
    }

    fn check_dim(&self, other: &Self) -> Result<(), LinalgError> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn matmul(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix, LinalgError> {
    a.matmul(b)
}

pub fn trace(a: &SquareMatrix) -> Complex64 {
    a.trace()
}

pub fn matrix_power(a: &SquareMatrix, k: u32) -> SquareMatrix {
    a.pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(n: usize, seed: u64) -> SquareMatrix {
        // small LCG keeps unit tests free of rand
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let data = (0..n * n).map(|_| c(next(), next())).collect();
        SquareMatrix::from_vec(n, data).unwrap()
    }

    #[test]
    fn identity_and_zero_products() {
        let a = sample(4, 3);
        let i = SquareMatrix::identity(4).unwrap();
        let z = SquareMatrix::zeros(4).unwrap();
        assert_eq!(i.matmul(&a).unwrap(), a);
        assert_eq!(a.matmul(&z).unwrap(), z);
    }

    #[test]
    fn dimension_errors() {
        assert_eq!(SquareMatrix::zeros(0), Err(LinalgError::InvalidDimension(0)));
        assert_eq!(SquareMatrix::zeros(33), Err(LinalgError::InvalidDimension(33)));
        let a = SquareMatrix::identity(2).unwrap();
        let b = SquareMatrix::identity(3).unwrap();
        assert!(matches!(
            a.matmul(&b),
            Err(LinalgError::DimensionMismatch { left: 2, right: 3 })
        ));
        assert!(matches!(
            SquareMatrix::from_rows(&[vec![c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]),
            Err(LinalgError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn traces() {
        assert_eq!(SquareMatrix::identity(3).unwrap().trace(), c(3.0, 0.0));
        let d = SquareMatrix::from_diagonal(&[c(1.0, 1.0), c(1.0, -1.0)]).unwrap();
        assert_eq!(d.trace(), c(2.0, 0.0));
        let a = sample(5, 11);
        let b = sample(5, 12);
        let ab = a.matmul(&b).unwrap().trace();
        let ba = b.matmul(&a).unwrap().trace();
        assert!((ab - ba).norm() < 1e-12);
    }

    #[test]
    fn powers() {
        let a = sample(3, 5);
        assert_eq!(a.pow(1), a);
        let i = SquareMatrix::identity(6).unwrap();
        assert_eq!(i.pow(5), i);
        let a3 = a.matmul(&a).unwrap().matmul(&a).unwrap();
        assert!(a.pow(3).max_abs_diff(&a3) < 1e-14);
        let a0 = a.pow(0);
        assert_eq!(a0, SquareMatrix::identity(3).unwrap());
    }

    #[test]
    fn determinant_of_triangular() {
        let m = SquareMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(5.0, 1.0), c(0.0, 3.0)],
            vec![c(0.0, 0.0), c(0.0, 1.0), c(7.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        assert!((m.determinant() - c(0.0, -2.0)).norm() < 1e-15);
    }
}
