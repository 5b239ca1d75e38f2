//! Scalar abstraction: the whole crate is generic over the coefficient type.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point coefficient type for tensors, paths and kernels.
///
/// Implemented by `f32` and `f64`. The tolerances quoted throughout the
/// crate documentation are calibrated for `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for tolerance constants.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("float-to-float conversion cannot fail")
    }

    /// Conversion from a small count (factorials, word lengths, grid sizes).
    fn from_count(k: usize) -> Self {
        Self::from_usize(k).expect("count-to-float conversion cannot fail")
    }

    /// Diagnostic value for error messages.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}
