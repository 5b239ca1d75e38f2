//! Signature kernels via the Goursat PDE, Gram matrices, and the unbiased
//! MMD² two-sample statistic.
//!
//! The kernel of two paths is the far-corner value of the solution U of
//! ∂²U/∂p∂q = κ(Ẋ_p, Ẏ_q)·U with unit boundary data, solved here by an
//! explicit second-order finite-difference sweep on the grid induced by the
//! path vertices times a dyadic subdivision. The local source coefficient is
//! taken in increment form — ⟨ΔX, ΔY⟩ for the linear kernel and the double
//! difference of κ for RBF — which is exact for linear κ on piecewise-linear
//! paths and never differentiates the lift.

use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{symmetric_eigenvalues, SquareMatrix};
use crate::scalar::Scalar;
use crate::stream::PiecewiseLinearPath;

/// Gram eigenvalues below this are flagged as discretization artifacts.
pub const PSD_FLAG_TOL: f64 = -1e-8;
/// Gram eigenvalues below this fail the computation outright.
pub const PSD_FATAL_TOL: f64 = -1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("RBF bandwidth must be positive and finite, got {sigma}")]
    InvalidBandwidth { sigma: f64 },
    #[error("paths have mismatched dimensions {left} and {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("refinement level {refine} is too large")]
    RefineTooLarge { refine: usize },
    #[error("path collection {side:?} is empty")]
    EmptyCollection { side: &'static str },
    #[error("the unbiased MMD estimator needs at least 2 samples per side, {side:?} has {found}")]
    TooFewSamples { side: &'static str, found: usize },
    #[error("Gram matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    PsdViolated { min_eigenvalue: f64 },
    #[error("PDE solution overflowed to a non-finite value; reduce path scale or refinement")]
    NonFinite,
}

/// Pointwise kernel on state space lifting paths before signing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticKernel<F: Scalar> {
    /// κ(x, y) = ⟨x, y⟩
    Linear,
    /// κ(x, y) = exp(−|x−y|²/(2σ²))
    Rbf { sigma: F },
}

impl<F: Scalar> StaticKernel<F> {
    pub fn linear() -> Self {
        Self::Linear
    }

    pub fn rbf(sigma: F) -> Result<Self, KernelError> {
        if !(sigma.is_finite() && sigma > F::zero()) {
            return Err(KernelError::InvalidBandwidth {
                sigma: sigma.as_f64(),
            });
        }
        Ok(Self::Rbf { sigma })
    }

    pub fn eval(&self, x: &[F], y: &[F]) -> F {
        match self {
            Self::Linear => dot(x, y),
            Self::Rbf { sigma } => {
                let mut sq = F::zero();
                for (a, b) in x.iter().zip(y) {
                    let diff = *a - *b;
                    sq = sq + diff * diff;
                }
                let two = F::from_f64_lossy(2.0);
                (-sq / (two * *sigma * *sigma)).exp()
            }
        }
    }
}

fn dot<F: Scalar>(x: &[F], y: &[F]) -> F {
    x.iter().zip(y).fold(F::zero(), |acc, (&a, &b)| acc + a * b)
}

/// Goursat solution grid for one path pair: (P+1)×(Q+1) values with the
/// first row and column exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGrid<F: Scalar> {
    rows: usize,
    cols: usize,
    values: Vec<F>,
}

impl<F: Scalar> KernelGrid<F> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn value(&self, i: usize, j: usize) -> F {
        self.values[i * self.cols + j]
    }

    /// U at the far corner: the kernel value.
    pub fn corner(&self) -> F {
        self.values[self.rows * self.cols - 1]
    }
}

/// Sample points of the path with every segment subdivided 2^refine times.
fn sample_path<F: Scalar>(
    path: &PiecewiseLinearPath<F>,
    refine: usize,
) -> Result<Vec<Vec<F>>, KernelError> {
    if refine > 30 {
        return Err(KernelError::RefineTooLarge { refine });
    }
    let sub = 1usize << refine;
    let mut samples = Vec::with_capacity(path.num_segments() * sub + 1);
    for pair in path.points().windows(2) {
        for m in 0..sub {
            let alpha = F::from_count(m) / F::from_count(sub);
            samples.push(
                pair[0]
                    .iter()
                    .zip(&pair[1])
                    .map(|(&a, &b)| a + alpha * (b - a))
                    .collect(),
            );
        }
    }
    samples.push(path.points().last().unwrap().clone());
    Ok(samples)
}

fn check_dims<F: Scalar>(
    x: &PiecewiseLinearPath<F>,
    y: &PiecewiseLinearPath<F>,
) -> Result<(), KernelError> {
    if x.dim() != y.dim() {
        return Err(KernelError::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    Ok(())
}

/// Local increment-form source coefficients A(i, j) for one row strip, plus
/// the sweep over that row of the explicit update
/// U(i+1,j+1) = U(i+1,j) + U(i,j+1) − U(i,j) + ½A(i,j)(U(i+1,j) + U(i,j+1)).
fn sweep_row<F: Scalar>(prev: &[F], coeff_row: &[F]) -> Vec<F> {
    let half = F::from_f64_lossy(0.5);
    let mut cur = Vec::with_capacity(prev.len());
    cur.push(F::one());
    for (j, &a) in coeff_row.iter().enumerate() {
        let u = cur[j] + prev[j + 1] - prev[j] + half * a * (cur[j] + prev[j + 1]);
        cur.push(u);
    }
    cur
}

enum RowCoeffs<'a, F: Scalar> {
    Linear {
        dxs: &'a [Vec<F>],
        dys: &'a [Vec<F>],
    },
    Rbf {
        kernel: StaticKernel<F>,
        xs: &'a [Vec<F>],
        ys: &'a [Vec<F>],
    },
}

impl<F: Scalar> RowCoeffs<'_, F> {
    fn row(&self, i: usize, krow_prev: &mut Vec<F>, krow_cur: &mut Vec<F>) -> Vec<F> {
        match self {
            RowCoeffs::Linear { dxs, dys } => dys.iter().map(|dy| dot(&dxs[i], dy)).collect(),
            RowCoeffs::Rbf { kernel, xs, ys } => {
                if i == 0 {
                    *krow_prev = ys.iter().map(|y| kernel.eval(&xs[0], y)).collect();
                } else {
                    std::mem::swap(krow_prev, krow_cur);
                }
                *krow_cur = ys.iter().map(|y| kernel.eval(&xs[i + 1], y)).collect();
                (0..ys.len() - 1)
                    .map(|j| krow_cur[j + 1] - krow_cur[j] - krow_prev[j + 1] + krow_prev[j])
                    .collect()
            }
        }
    }
}

fn solve_goursat<F: Scalar>(
    x: &PiecewiseLinearPath<F>,
    y: &PiecewiseLinearPath<F>,
    kernel: StaticKernel<F>,
    refine: usize,
    keep_grid: bool,
) -> Result<(F, Option<KernelGrid<F>>), KernelError> {
    check_dims(x, y)?;
    let xs = sample_path(x, refine)?;
    let ys = sample_path(y, refine)?;
    let p = xs.len() - 1;
    let q = ys.len() - 1;
    let dxs: Vec<Vec<F>> = xs
        .windows(2)
        .map(|w| w[0].iter().zip(&w[1]).map(|(&a, &b)| b - a).collect())
        .collect();
    let dys: Vec<Vec<F>> = ys
        .windows(2)
        .map(|w| w[0].iter().zip(&w[1]).map(|(&a, &b)| b - a).collect())
        .collect();
    let coeffs = match kernel {
        StaticKernel::Linear => RowCoeffs::Linear {
            dxs: &dxs,
            dys: &dys,
        },
        StaticKernel::Rbf { .. } => RowCoeffs::Rbf {
            kernel,
            xs: &xs,
            ys: &ys,
        },
    };
    let mut grid = if keep_grid {
        Some(Vec::with_capacity((p + 1) * (q + 1)))
    } else {
        None
    };
    let mut prev = vec![F::one(); q + 1];
    if let Some(g) = grid.as_mut() {
        g.extend_from_slice(&prev);
    }
    let mut krow_prev = Vec::new();
    let mut krow_cur = Vec::new();
    for i in 0..p {
        let coeff_row = coeffs.row(i, &mut krow_prev, &mut krow_cur);
        let cur = sweep_row(&prev, &coeff_row);
        if let Some(g) = grid.as_mut() {
            g.extend_from_slice(&cur);
        }
        prev = cur;
    }
    let corner = *prev.last().unwrap();
    if !corner.is_finite() {
        return Err(KernelError::NonFinite);
    }
    let grid = grid.map(|values| KernelGrid {
        rows: p + 1,
        cols: q + 1,
        values,
    });
    Ok((corner, grid))
}

/// Signature kernel of two paths: the far-corner Goursat value with each
/// path segment subdivided 2^refine times.
pub fn sig_kernel<F: Scalar>(
    x: &PiecewiseLinearPath<F>,
    y: &PiecewiseLinearPath<F>,
    kernel: StaticKernel<F>,
    refine: usize,
) -> Result<F, KernelError> {
    solve_goursat(x, y, kernel, refine, false).map(|(corner, _)| corner)
}

/// Full solution grid, for diagnostics and boundary checks.
pub fn sig_kernel_grid<F: Scalar>(
    x: &PiecewiseLinearPath<F>,
    y: &PiecewiseLinearPath<F>,
    kernel: StaticKernel<F>,
    refine: usize,
) -> Result<KernelGrid<F>, KernelError> {
    solve_goursat(x, y, kernel, refine, true).map(|(_, grid)| grid.expect("grid requested"))
}

/// Gram matrix G\[a\]\[b\] = sig_kernel(A_a, B_b). Pairs are solved in
/// parallel; assembly order is fixed, so results are deterministic.
pub fn gram<F: Scalar>(
    paths_a: &[PiecewiseLinearPath<F>],
    paths_b: &[PiecewiseLinearPath<F>],
    kernel: StaticKernel<F>,
    refine: usize,
) -> Result<Vec<Vec<F>>, KernelError> {
    if paths_a.is_empty() {
        return Err(KernelError::EmptyCollection { side: "A" });
    }
    if paths_b.is_empty() {
        return Err(KernelError::EmptyCollection { side: "B" });
    }
    let nb = paths_b.len();
    let flat: Vec<Result<F, KernelError>> = (0..paths_a.len() * nb)
        .into_par_iter()
        .map(|idx| sig_kernel(&paths_a[idx / nb], &paths_b[idx % nb], kernel, refine))
        .collect();
    let mut values = Vec::with_capacity(flat.len());
    for v in flat {
        values.push(v?);
    }
    Ok(values.chunks(nb).map(|row| row.to_vec()).collect())
}

/// Symmetric Gram matrix of one collection with its PSD diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricGram<F: Scalar> {
    pub matrix: Vec<Vec<F>>,
    pub min_eigenvalue: F,
    /// True when the smallest eigenvalue dips below [`PSD_FLAG_TOL`] —
    /// discretization noise worth reporting, not yet fatal.
    pub flagged: bool,
}

/// Gram matrix of a collection against itself. Only the upper triangle is
/// solved; the matrix is exactly symmetric by construction. Eigenvalues
/// below [`PSD_FATAL_TOL`] are an error.
pub fn gram_symmetric<F: Scalar>(
    paths: &[PiecewiseLinearPath<F>],
    kernel: StaticKernel<F>,
    refine: usize,
) -> Result<SymmetricGram<F>, KernelError> {
    if paths.is_empty() {
        return Err(KernelError::EmptyCollection { side: "A" });
    }
    let n = paths.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let solved: Vec<Result<F, KernelError>> = pairs
        .par_iter()
        .map(|&(i, j)| sig_kernel(&paths[i], &paths[j], kernel, refine))
        .collect();
    let mut matrix = vec![vec![F::zero(); n]; n];
    for (&(i, j), v) in pairs.iter().zip(solved) {
        let v = v?;
        matrix[i][j] = v;
        matrix[j][i] = v;
    }
    let data: Vec<F> = matrix.iter().flatten().copied().collect();
    let m = SquareMatrix::from_row_major(n, data).expect("kernel values are finite");
    let eigenvalues = symmetric_eigenvalues(&m);
    let min_eigenvalue = eigenvalues[0];
    if min_eigenvalue < F::from_f64_lossy(PSD_FATAL_TOL) {
        return Err(KernelError::PsdViolated {
            min_eigenvalue: min_eigenvalue.as_f64(),
        });
    }
    Ok(SymmetricGram {
        matrix,
        min_eigenvalue,
        flagged: min_eigenvalue < F::from_f64_lossy(PSD_FLAG_TOL),
    })
}

/// Unbiased MMD² estimator between two path samples:
/// mean of off-diagonal within-P kernels, minus twice the cross mean, plus
/// the off-diagonal within-Q mean. Needs at least two paths per side.
pub fn mmd2_unbiased<F: Scalar>(
    samples_p: &[PiecewiseLinearPath<F>],
    samples_q: &[PiecewiseLinearPath<F>],
    kernel: StaticKernel<F>,
    refine: usize,
) -> Result<F, KernelError> {
    let m = samples_p.len();
    let n = samples_q.len();
    if m < 2 {
        return Err(KernelError::TooFewSamples {
            side: "P",
            found: m,
        });
    }
    if n < 2 {
        return Err(KernelError::TooFewSamples {
            side: "Q",
            found: n,
        });
    }
    let upper_sum = |paths: &[PiecewiseLinearPath<F>]| -> Result<F, KernelError> {
        let k = paths.len();
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        let solved: Vec<Result<F, KernelError>> = pairs
            .par_iter()
            .map(|&(i, j)| sig_kernel(&paths[i], &paths[j], kernel, refine))
            .collect();
        let mut total = F::zero();
        for v in solved {
            total = total + v?;
        }
        Ok(total)
    };
    let two = F::from_f64_lossy(2.0);
    let pp = upper_sum(samples_p)?;
    let qq = upper_sum(samples_q)?;
    let cross = gram(samples_p, samples_q, kernel, refine)?
        .iter()
        .flatten()
        .fold(F::zero(), |acc, &v| acc + v);
    let m_f = F::from_count(m);
    let n_f = F::from_count(n);
    let term_pp = two * pp / (m_f * (m_f - F::one()));
    let term_qq = two * qq / (n_f * (n_f - F::one()));
    let term_cross = two * cross / (m_f * n_f);
    Ok(term_pp - term_cross + term_qq)
}
