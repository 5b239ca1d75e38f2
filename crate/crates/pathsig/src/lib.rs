//! Signature toolkit for multichannel streams.
//!
//! The crate computes truncated signatures and log-signatures of
//! piecewise-linear paths, solves controlled differential equations by the
//! log-ODE method, and evaluates signature kernels and MMD statistics
//! through a Goursat PDE.
//!
//! - [`tensor`]: arithmetic in the truncated free tensor algebra T^(n)(R^d)
//!   — concatenation product, exp and log.
//! - [`lyndon`]: the Lyndon-word basis of the free Lie algebra, converting
//!   log-signature tensors to compact coordinates and back.
//! - [`stream`]: ingestion of delimited time series and tick data into
//!   continuous piecewise-linear embeddings.
//! - [`signature`](mod@signature): exact truncated signatures via
//!   per-segment exponentials and Chen concatenation, plus Lévy areas.
//! - [`logode`]: the log-ODE method — per step, freeze the log-signature
//!   into an autonomous vector field and take its unit-time RK4 flow.
//! - [`sigkernel`]: signature kernels by finite differences on the Goursat
//!   PDE, Gram matrices, and the unbiased MMD² statistic.
//!
//! Everything is generic over the coefficient type via [`Scalar`]
//! (`f32` or `f64`); the aliases below pin the common instantiations. All
//! tolerances quoted in the documentation assume `f64`.

pub mod linalg;
pub mod logode;
pub mod lyndon;
pub mod scalar;
pub mod sigkernel;
pub mod signature;
pub mod stream;
pub mod tensor;

pub use linalg::{symmetric_eigenvalues, MatrixError, SquareMatrix};
pub use logode::{
    frozen_field, logode_step, solve_cde, FrozenField, LogOdeConfig, LogOdeError, VectorFieldSet,
};
pub use lyndon::{
    bracket_to_tensor, is_lyndon, lyndon_words, standard_bracketing, BracketTree, LyndonBasis,
    LyndonCoordinates, LyndonError,
};
pub use scalar::Scalar;
pub use sigkernel::{
    gram, gram_symmetric, mmd2_unbiased, sig_kernel, sig_kernel_grid, KernelError, KernelGrid,
    StaticKernel, SymmetricGram,
};
pub use signature::{
    chen_concat, levy_area, log_signature, log_signature_in_basis, signature, SignatureError,
    SignatureResult,
};
pub use stream::{
    embed_counting, embed_linear, parse_table, parse_ticks, Delimiter, MissingPolicy,
    PiecewiseLinearPath, Stream, StreamError, TableFormat, TickTable,
};
pub use tensor::{word_label, AlgebraError, AlgebraShape, TruncatedTensor};

/// `f64` instantiations — the defaults the CLI and the documented tolerances
/// are built on.
pub type Tensor64 = tensor::TruncatedTensor<f64>;
pub type Path64 = stream::PiecewiseLinearPath<f64>;
pub type Stream64 = stream::Stream<f64>;
pub type Signature64 = signature::SignatureResult<f64>;
pub type LogSignature64 = lyndon::LyndonCoordinates<f64>;
pub type Basis64 = lyndon::LyndonBasis<f64>;
pub type Kernel64 = sigkernel::StaticKernel<f64>;
pub type Matrix64 = linalg::SquareMatrix<f64>;

/// `f32` instantiations for memory-bound workloads; expect looser accuracy
/// than the documented `f64` tolerances.
pub type Tensor32 = tensor::TruncatedTensor<f32>;
pub type Path32 = stream::PiecewiseLinearPath<f32>;
pub type Stream32 = stream::Stream<f32>;
pub type Signature32 = signature::SignatureResult<f32>;
pub type LogSignature32 = lyndon::LyndonCoordinates<f32>;
pub type Basis32 = lyndon::LyndonBasis<f32>;
pub type Kernel32 = sigkernel::StaticKernel<f32>;
pub type Matrix32 = linalg::SquareMatrix<f32>;
