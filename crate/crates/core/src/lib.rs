//! Reflectionless discrete perfectly matched layers (RDPML) for symmetric
//! even-order finite-difference discretizations of the scalar wave equation.
//!
//! The crate is organized around the pipeline used by the experiment harness:
//!
//! * [`stencil`] — generation and application of symmetric `2p`-order
//!   Laplacian stencils (exact rational coefficient solve),
//! * [`dispersion`] — characteristic polynomial, discrete wavenumbers, the
//!   per-node decay factor of the discrete stretching, and damping profiles,
//! * [`rdpml1d`] / [`rdpml2d`] — semi-discrete right-hand sides for the wave
//!   equation with PML auxiliary variables, plus boundary closures,
//! * [`timeint`] — fixed-step explicit Runge-Kutta integration,
//! * [`helmholtz`] — frequency-domain block systems (full and reduced) and a
//!   direct complex solver,
//! * [`experiments`] — the reproducible experiment drivers and CSV output.
//!
//! All numeric kernels are generic over the floating scalar via [`Scalar`];
//! the concrete aliases below fix `f64` for the experiment harness.

pub mod dispersion;
pub mod error;
pub mod experiments;
pub mod helmholtz;
pub mod rdpml1d;
pub mod rdpml2d;
pub mod scalar;
pub mod stencil;
pub mod timeint;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Scalar type used by the experiment harness and the CLI.
pub type Real = f64;
/// Complex counterpart of [`Real`].
pub type Cplx = num_complex::Complex<Real>;

/// Stencil coefficients over the default scalar.
pub type StencilCoeffs = stencil::StencilCoeffs<Real>;
/// 1D packed state over the default scalar.
pub type State1d = rdpml1d::State1d<Real>;
/// 2D packed state over the default scalar.
pub type State2d = rdpml2d::State2d<Real>;

