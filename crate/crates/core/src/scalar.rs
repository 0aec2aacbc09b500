//! Floating scalar abstraction: every kernel is written against [`Scalar`]
//! so the same code runs in `f32` or `f64` (the harness pins `f64`).

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps};

/// Floating-point scalar usable by all numeric kernels.
pub trait Scalar:
    Float + NumAssignOps + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64` (exact for `f64` itself).
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to scalar")
    }

    fn from_index(n: usize) -> Self {
        Self::from_usize(n).expect("grid index converts to scalar")
    }
}

impl<T> Scalar for T where
    T: Float + NumAssignOps + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}

/// Values a stencil can be applied to: the scalar itself or its complex
/// extension.
pub trait StencilValue<S: Scalar>:
    Copy
    + num_traits::Zero
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<S, Output = Self>
    + Send
    + Sync
{
}

impl<S: Scalar, T> StencilValue<S> for T where
    T: Copy
        + num_traits::Zero
        + std::ops::Add<Output = T>
        + std::ops::Sub<Output = T>
        + std::ops::Mul<S, Output = T>
        + Send
        + Sync
{
}
