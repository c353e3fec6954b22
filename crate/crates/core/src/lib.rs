//! Measures, coordinate transformations and monotone-metric machinery for
//! two-level quantum systems.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: 2x2 complex matrices, Bloch vectors, SU(2) Euler angles,
//!   spectral decomposition and matrix functions.
//! - [`rng`]: seeded, reproducible random streams and the worker-splitting
//!   contract used by every batch sampler.
//! - [`measures`]: symmetric Dirichlet measures on the eigenvalue simplex,
//!   Haar measure on SU(2), their product on density matrices and the
//!   closed-form densities on the Bloch ball.
//! - [`monotone`]: candidate metric functions `f(t)`, monotone-metric volume
//!   elements, self-adjointness and monotonicity profiling, a numerical
//!   operator-monotonicity tester, Morozova-Chentsov means and the Bures
//!   distance.
//! - [`verify`]: goodness-of-fit statistics and the Monte Carlo checks that
//!   tie samplers to analytic densities.

#![forbid(unsafe_code)]
// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod linalg;
pub mod measures;
pub mod monotone;
pub mod quad;
pub mod rng;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{BlochVector, EulerAngles, Matrix2C, Spectral2};
pub use measures::{DirichletParams, SimplexPoint, ZhslCoordinates};
pub use monotone::{MonotonicityProfile, OperatorMonotonicityReport, ScalarFunction};
pub use num_complex::Complex64;
pub use rng::RngStream;
pub use verify::{GoFReport, Histogram};
