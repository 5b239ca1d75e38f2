//! Dense square matrices and a symmetric eigensolver, sized for the small
//! systems this crate manipulates (vector-field sets, Gram matrices).

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix rows must all have length {expected}, row {row} has {found}")]
    Ragged {
        expected: usize,
        row: usize,
        found: usize,
    },
    #[error("matrix must be square and non-empty")]
    NotSquare,
    #[error("matrix contains a non-finite entry")]
    NonFinite,
}

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<F: Scalar> {
    dim: usize,
    data: Vec<F>,
}

impl<F: Scalar> SquareMatrix<F> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![F::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, MatrixError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(MatrixError::NotSquare);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(MatrixError::Ragged {
                    expected: dim,
                    row: i,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        Ok(Self { dim, data })
    }

    /// Row-major buffer of length dim².
    pub fn from_row_major(dim: usize, data: Vec<F>) -> Result<Self, MatrixError> {
        if dim == 0 || data.len() != dim * dim {
            return Err(MatrixError::NotSquare);
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.dim + j]
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, lambda: F) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&a| a * lambda).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == F::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[F]) -> Vec<F> {
        debug_assert_eq!(self.dim, v.len());
        let n = self.dim;
        (0..n)
            .map(|i| {
                let mut acc = F::zero();
                for j in 0..n {
                    acc = acc + self.data[i * n + j] * v[j];
                }
                acc
            })
            .collect()
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
///
/// The input must be symmetric; convergence is quadratic and 30 sweeps are
/// far more than the small matrices here need.
pub fn symmetric_eigenvalues<F: Scalar>(m: &SquareMatrix<F>) -> Vec<F> {
    let n = m.dim;
    let mut a = m.data.clone();
    if n == 1 {
        return vec![a[0]];
    }
    let frobenius = a.iter().fold(F::zero(), |acc, &v| acc + v * v).sqrt();
    let tol = F::epsilon() * (F::one() + frobenius);
    for _sweep in 0..30 {
        let mut off = F::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off + a[i * n + j] * a[i * n + j];
                }
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= F::epsilon() * frobenius {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (F::from_f64_lossy(2.0) * apq);
                let t = {
                    let denom = theta.abs() + (theta * theta + F::one()).sqrt();
                    if theta.is_sign_negative() {
                        -(F::one() / denom)
                    } else {
                        F::one() / denom
                    }
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<F> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    eig
}
