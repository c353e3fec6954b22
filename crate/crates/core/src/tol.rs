//! Shared numeric tolerances.
//!
//! Structure predicates (Hermitian, unitary, density) default to
//! [`STRUCTURE`]; arithmetic identities are checked at [`ARITHMETIC`].
//! The CLI and the test suites read from this table so that every check
//! agrees on what "equal" means.

/// Default tolerance for structural predicates on matrices.
pub const STRUCTURE: f64 = 1e-10;

/// Tolerance for arithmetic identities (round trips, unitarity of closed forms).
pub const ARITHMETIC: f64 = 1e-12;

/// Slack allowed when constructing a [`BlochVector`](crate::BlochVector) with norm above one.
pub const BLOCH_NORM: f64 = 1e-12;

/// Spectral gap below which a 2x2 Hermitian matrix is treated as degenerate.
pub const DEGENERATE_GAP: f64 = 1e-12;

/// Loewner-order input tolerance: `H - K` is PSD when its minimum eigenvalue is at least `-PSD_INPUT`.
pub const PSD_INPUT: f64 = 1e-10;

/// An operator-monotonicity violation needs `min eig(f(H) - f(K)) < -VIOLATION`.
pub const VIOLATION: f64 = 1e-8;

/// Finite-difference dead band used by monotonicity profiles.
pub const MONOTONE_STEP: f64 = 1e-13;

/// Self-adjointness residual threshold (scaled, see `check_self_adjoint`).
pub const SELF_ADJOINT: f64 = 1e-10;
