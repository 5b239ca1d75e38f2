//! The log-ODE method for controlled differential equations dY = f(Y) dX.
//!
//! Per step, the log-signature of the driving path over the step interval is
//! translated into an autonomous "frozen" vector field: each Lyndon basis
//! word contributes its coordinate times the iterated Lie bracket of the
//! driving fields that mirrors the word's bracketing. The step is then the
//! unit-time flow of that field, integrated with fixed-substep classical
//! RK4 so results are deterministic.
//!
//! Vector-field brackets follow the derivation convention
//! \[f, g\](y) = Dg(y)·f(y) − Df(y)·g(y); for linear fields f(y) = A·y,
//! g(y) = B·y this is (B·A − A·B)·y. With that orientation the method applied
//! to the right-multiplication fields of the tensor algebra reproduces the
//! signature itself, which doubles as the solver's self-test.

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{MatrixError, SquareMatrix};
use crate::lyndon::{BracketTree, LyndonBasis, LyndonCoordinates};
use crate::scalar::Scalar;
use crate::signature::{log_signature_in_basis, SignatureError};
use crate::stream::{PiecewiseLinearPath, StreamError};
use crate::tensor::{AlgebraError, AlgebraShape};

/// Default RK4 substep count per log-ODE step.
pub const DEFAULT_SUBSTEPS: usize = 8;
/// Relative displacement used by central finite differences when a
/// directional-derivative callback is not supplied.
pub const FD_SCALE: f64 = 1e-5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LogOdeError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("vector field set drives {found} channels, path has {expected}")]
    ChannelMismatch { expected: usize, found: usize },
    #[error("state has dimension {found}, vector fields expect {expected}")]
    StateDimension { expected: usize, found: usize },
    #[error(
        "depth {requested} exceeds the differentiability budget of nonlinear fields \
         (limit {max}: {detail})"
    )]
    DepthUnsupported {
        requested: usize,
        max: usize,
        detail: &'static str,
    },
    #[error("non-finite state encountered at partition step {step}")]
    NonFiniteState { step: usize },
    #[error("partition must be strictly increasing with at least two points")]
    BadPartition,
    #[error("log-ODE depth must be at least 1")]
    ZeroDepth,
    #[error("at least one RK4 substep is required")]
    ZeroSubsteps,
}

type FieldEval<F> = dyn Fn(usize, &[F]) -> Vec<F> + Send + Sync;
type FieldJvp<F> = dyn Fn(usize, &[F], &[F]) -> Vec<F> + Send + Sync;

/// The driving vector fields f^1, …, f^d on R^v.
pub enum VectorFieldSet<F: Scalar> {
    /// f^i(y) = A_i·y for v×v matrices A_i. Brackets of any depth are exact
    /// matrix expressions, so every log-signature depth is supported.
    Linear { matrices: Vec<SquareMatrix<F>> },
    /// Callback fields. `eval(i, y)` returns f^i(y) with `i` zero-based
    /// (channel i drives letter i+1). The optional `jvp(i, y, h)` returns the
    /// directional derivative Df^i(y)·h; without it, brackets fall back to
    /// central finite differences and only depth <= 2 is supported
    /// (<= 3 with `jvp`). Callbacks must be deterministic for fixed inputs
    /// and safe for concurrent invocation.
    General {
        state_dim: usize,
        channels: usize,
        eval: Box<FieldEval<F>>,
        jvp: Option<Box<FieldJvp<F>>>,
    },
}

impl<F: Scalar> VectorFieldSet<F> {
    /// Linear fields from one matrix per channel; all must be square of the
    /// same dimension.
    pub fn linear(matrices: Vec<SquareMatrix<F>>) -> Result<Self, LogOdeError> {
        if matrices.is_empty() {
            return Err(MatrixError::NotSquare.into());
        }
        let v = matrices[0].dim();
        if matrices.iter().any(|m| m.dim() != v) {
            return Err(LogOdeError::StateDimension {
                expected: v,
                found: matrices.iter().map(|m| m.dim()).find(|&d| d != v).unwrap(),
            });
        }
        Ok(Self::Linear { matrices })
    }

    pub fn general(
        state_dim: usize,
        channels: usize,
        eval: impl Fn(usize, &[F]) -> Vec<F> + Send + Sync + 'static,
    ) -> Self {
        Self::General {
            state_dim,
            channels,
            eval: Box::new(eval),
            jvp: None,
        }
    }

    pub fn general_with_jvp(
        state_dim: usize,
        channels: usize,
        eval: impl Fn(usize, &[F]) -> Vec<F> + Send + Sync + 'static,
        jvp: impl Fn(usize, &[F], &[F]) -> Vec<F> + Send + Sync + 'static,
    ) -> Self {
        Self::General {
            state_dim,
            channels,
            eval: Box::new(eval),
            jvp: Some(Box::new(jvp)),
        }
    }

    pub fn state_dim(&self) -> usize {
        match self {
            Self::Linear { matrices } => matrices[0].dim(),
            Self::General { state_dim, .. } => *state_dim,
        }
    }

    pub fn channels(&self) -> usize {
        match self {
            Self::Linear { matrices } => matrices.len(),
            Self::General { channels, .. } => *channels,
        }
    }
}

/// Step partition and solver knobs for [`solve_cde`].
#[derive(Debug, Clone)]
pub struct LogOdeConfig<F: Scalar> {
    /// Log-signature truncation depth per step (>= 1).
    pub depth: usize,
    /// Step endpoints r_0 < r_1 < … < r_m inside the path span.
    pub partition: Vec<F>,
    /// Fixed RK4 substeps per step.
    pub substeps: usize,
}

impl<F: Scalar> LogOdeConfig<F> {
    /// Uniform partition of `[start, end]` into `steps` intervals with the
    /// default substep count.
    pub fn uniform(start: F, end: F, steps: usize, depth: usize) -> Self {
        let h = (end - start) / F::from_count(steps.max(1));
        let mut partition: Vec<F> = (0..steps).map(|k| start + F::from_count(k) * h).collect();
        partition.push(end);
        Self {
            depth,
            partition,
            substeps: DEFAULT_SUBSTEPS,
        }
    }

    pub fn with_substeps(mut self, substeps: usize) -> Self {
        self.substeps = substeps;
        self
    }
}

/// The autonomous vector field F(y) = Σ_w coords_w · B_w(y) frozen from one
/// log-signature, where B_w brackets the driving fields along the Lyndon
/// bracketing of w.
pub struct FrozenField<'a, F: Scalar> {
    kind: FrozenKind<'a, F>,
    state_dim: usize,
}

enum FrozenKind<'a, F: Scalar> {
    Matrix(SquareMatrix<F>),
    Brackets {
        terms: Vec<(F, &'a BracketTree)>,
        eval: &'a FieldEval<F>,
        jvp: Option<&'a FieldJvp<F>>,
    },
}

impl<F: Scalar> FrozenField<'_, F> {
    pub fn eval(&self, y: &[F]) -> Vec<F> {
        match &self.kind {
            FrozenKind::Matrix(m) => m.matvec(y),
            FrozenKind::Brackets { terms, eval, jvp } => {
                let mut out = vec![F::zero(); self.state_dim];
                for &(c, tree) in terms {
                    let b = bracket_eval(*eval, *jvp, tree, y);
                    for (o, v) in out.iter_mut().zip(b) {
                        *o = *o + c * v;
                    }
                }
                out
            }
        }
    }

    /// The assembled matrix when the fields are linear.
    pub fn matrix(&self) -> Option<&SquareMatrix<F>> {
        match &self.kind {
            FrozenKind::Matrix(m) => Some(m),
            FrozenKind::Brackets { .. } => None,
        }
    }
}

/// Freeze a log-signature into an autonomous vector field.
pub fn frozen_field<'a, F: Scalar>(
    vf: &'a VectorFieldSet<F>,
    logsig: &'a LyndonCoordinates<F>,
) -> Result<FrozenField<'a, F>, LogOdeError> {
    let shape = logsig.basis().shape();
    if shape.channels() != vf.channels() {
        return Err(LogOdeError::ChannelMismatch {
            expected: shape.channels(),
            found: vf.channels(),
        });
    }
    let depth = shape.depth();
    match vf {
        VectorFieldSet::Linear { matrices } => {
            let v = matrices[0].dim();
            let mut total = SquareMatrix::zeros(v);
            for (i, &c) in logsig.coords().iter().enumerate() {
                if c == F::zero() {
                    continue;
                }
                total = total.add(&bracket_matrix(matrices, logsig.basis().bracketing(i)).scale(c));
            }
            Ok(FrozenField {
                kind: FrozenKind::Matrix(total),
                state_dim: v,
            })
        }
        VectorFieldSet::General {
            state_dim,
            eval,
            jvp,
            ..
        } => {
            if depth > 3 {
                return Err(LogOdeError::DepthUnsupported {
                    requested: depth,
                    max: 3,
                    detail: "nested brackets of nonlinear fields need derivatives \
                             beyond what callbacks can deliver accurately",
                });
            }
            if depth == 3 && jvp.is_none() {
                return Err(LogOdeError::DepthUnsupported {
                    requested: depth,
                    max: 2,
                    detail: "depth 3 needs a directional-derivative callback",
                });
            }
            let terms = logsig
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != F::zero())
                .map(|(i, &c)| (c, logsig.basis().bracketing(i)))
                .collect();
            Ok(FrozenField {
                kind: FrozenKind::Brackets {
                    terms,
                    eval: eval.as_ref(),
                    jvp: jvp.as_deref(),
                },
                state_dim: *state_dim,
            })
        }
    }
}

/// Matrix of the bracket B_w: letters map to their matrices, and
/// [u, v] maps to B_v·B_u − B_u·B_v (the derivation convention applied to
/// left-multiplication fields).
fn bracket_matrix<F: Scalar>(matrices: &[SquareMatrix<F>], tree: &BracketTree) -> SquareMatrix<F> {
    match tree {
        BracketTree::Letter(a) => matrices[*a - 1].clone(),
        BracketTree::Pair(u, v) => {
            let bu = bracket_matrix(matrices, u);
            let bv = bracket_matrix(matrices, v);
            bv.mul(&bu).sub(&bu.mul(&bv))
        }
    }
}

fn bracket_eval<F: Scalar>(
    eval: &FieldEval<F>,
    jvp: Option<&FieldJvp<F>>,
    tree: &BracketTree,
    y: &[F],
) -> Vec<F> {
    match tree {
        BracketTree::Letter(a) => eval(*a - 1, y),
        BracketTree::Pair(u, v) => {
            let fu = bracket_eval(eval, jvp, u, y);
            let fv = bracket_eval(eval, jvp, v, y);
            let dv_fu = directional_derivative(eval, jvp, v, y, &fu);
            let du_fv = directional_derivative(eval, jvp, u, y, &fv);
            dv_fu.into_iter().zip(du_fv).map(|(a, b)| a - b).collect()
        }
    }
}

/// D(B_tree)(y)·h, via the user jvp on bare letters when available and
/// central finite differences otherwise.
fn directional_derivative<F: Scalar>(
    eval: &FieldEval<F>,
    jvp: Option<&FieldJvp<F>>,
    tree: &BracketTree,
    y: &[F],
    h: &[F],
) -> Vec<F> {
    if let (BracketTree::Letter(a), Some(jvp)) = (tree, jvp) {
        return jvp(*a - 1, y, h);
    }
    let h_norm = norm(h);
    if h_norm == F::zero() {
        return vec![F::zero(); y.len()];
    }
    let displacement = F::from_f64_lossy(FD_SCALE) * (F::one() + norm(y));
    let eps = displacement / h_norm;
    let plus: Vec<F> = y.iter().zip(h).map(|(&a, &b)| a + eps * b).collect();
    let minus: Vec<F> = y.iter().zip(h).map(|(&a, &b)| a - eps * b).collect();
    let fp = bracket_eval(eval, jvp, tree, &plus);
    let fm = bracket_eval(eval, jvp, tree, &minus);
    let half = F::from_f64_lossy(0.5);
    fp.into_iter()
        .zip(fm)
        .map(|(a, b)| (a - b) * half / eps)
        .collect()
}

fn norm<F: Scalar>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |acc, &x| acc + x * x).sqrt()
}

/// Unit-time flow of a frozen field by fixed-substep classical RK4.
fn rk4_unit_flow<F: Scalar>(
    field: &FrozenField<'_, F>,
    z0: &[F],
    substeps: usize,
) -> Result<Vec<F>, LogOdeError> {
    let h = F::one() / F::from_count(substeps);
    let half = F::from_f64_lossy(0.5);
    let sixth = h / F::from_count(6);
    let two = F::from_f64_lossy(2.0);
    let mut y = z0.to_vec();
    let stage = |base: &[F], k: &[F], factor: F| -> Vec<F> {
        base.iter().zip(k).map(|(&a, &b)| a + factor * b).collect()
    };
    for _ in 0..substeps {
        let k1 = field.eval(&y);
        let k2 = field.eval(&stage(&y, &k1, half * h));
        let k3 = field.eval(&stage(&y, &k2, half * h));
        let k4 = field.eval(&stage(&y, &k3, h));
        for i in 0..y.len() {
            y[i] = y[i] + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(LogOdeError::NonFiniteState { step: 0 });
        }
    }
    Ok(y)
}

/// One log-ODE step: the state transported along a path segment, as the
/// unit-time flow of the field frozen from the segment's depth-`depth`
/// log-signature.
pub fn logode_step<F: Scalar>(
    vf: &VectorFieldSet<F>,
    z_start: &[F],
    segment: &PiecewiseLinearPath<F>,
    depth: usize,
    substeps: usize,
) -> Result<Vec<F>, LogOdeError> {
    let shape = AlgebraShape::new(segment.dim(), depth)?;
    let basis = Arc::new(LyndonBasis::new(shape));
    step_in_basis(vf, z_start, segment, &basis, substeps)
}

fn step_in_basis<F: Scalar>(
    vf: &VectorFieldSet<F>,
    z_start: &[F],
    segment: &PiecewiseLinearPath<F>,
    basis: &Arc<LyndonBasis<F>>,
    substeps: usize,
) -> Result<Vec<F>, LogOdeError> {
    if basis.shape().depth() == 0 {
        return Err(LogOdeError::ZeroDepth);
    }
    if substeps == 0 {
        return Err(LogOdeError::ZeroSubsteps);
    }
    if z_start.len() != vf.state_dim() {
        return Err(LogOdeError::StateDimension {
            expected: vf.state_dim(),
            found: z_start.len(),
        });
    }
    let logsig = log_signature_in_basis(segment, basis)?;
    let field = frozen_field(vf, &logsig)?;
    rk4_unit_flow(&field, z_start, substeps)
}

/// Solve dY = f(Y) dX over the configured partition, returning the state at
/// every partition point; `trajectory[0]` is `z0`.
pub fn solve_cde<F: Scalar>(
    vf: &VectorFieldSet<F>,
    path: &PiecewiseLinearPath<F>,
    config: &LogOdeConfig<F>,
    z0: &[F],
) -> Result<Vec<Vec<F>>, LogOdeError> {
    if config.depth == 0 {
        return Err(LogOdeError::ZeroDepth);
    }
    if config.substeps == 0 {
        return Err(LogOdeError::ZeroSubsteps);
    }
    if config.partition.len() < 2 || config.partition.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LogOdeError::BadPartition);
    }
    if vf.channels() != path.dim() {
        return Err(LogOdeError::ChannelMismatch {
            expected: path.dim(),
            found: vf.channels(),
        });
    }
    if z0.len() != vf.state_dim() {
        return Err(LogOdeError::StateDimension {
            expected: vf.state_dim(),
            found: z0.len(),
        });
    }
    let shape = AlgebraShape::new(path.dim(), config.depth)?;
    let basis = Arc::new(LyndonBasis::new(shape));
    let mut trajectory = Vec::with_capacity(config.partition.len());
    trajectory.push(z0.to_vec());
    for (step, bounds) in config.partition.windows(2).enumerate() {
        let segment = path.restrict(bounds[0], bounds[1])?;
        let next = step_in_basis(
            vf,
            trajectory.last().unwrap(),
            &segment,
            &basis,
            config.substeps,
        )
        .map_err(|e| match e {
            LogOdeError::NonFiniteState { .. } => LogOdeError::NonFiniteState { step },
            other => other,
        })?;
        trajectory.push(next);
    }
    Ok(trajectory)
}
