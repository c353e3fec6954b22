//! Candidate metric functions and the monotone-metric machinery built on them.
//!
//! A monotone metric on qubit states is fixed by a function `f` on `(0, inf)`
//! that is operator monotone and satisfies `f(t) = t f(1/t)`. In spherical
//! Bloch coordinates its (unnormalized) volume element is
//!
//! ```text
//! r^2 sin(theta) / ( f((1 - r)/(1 + r)) (1 - r^2)^(1/2) (1 + r) )
//! ```
//!
//! Matching that element to the product-measure density of concentration
//! `nu` forces `f` to be a member of [`derived_f`]. Those members are
//! self-adjoint but vanish at `t = 1` and decrease on `(0, 1)`, so none of
//! them is operator monotone.

mod function;
pub mod hermitian;
pub mod opmono;

use serde::{Deserialize, Serialize};

pub use function::{catalog, derived_f, Claims, FunctionKind, Interval, ScalarFunction};
pub use hermitian::CMatrix;
pub use opmono::{operator_monotonicity_test, Counterexample, OpMonoConfig, OperatorMonotonicityReport};

use crate::error::{domain, invalid, Error, Result};
use crate::linalg::{self, Matrix2C};
use crate::tol;

/// Monotone-metric volume element at Bloch radius `r` and polar angle `theta`.
pub fn volume_element(f: &ScalarFunction, r: f64, theta: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(domain(format!("volume element needs 0 < r < 1, got {r}")));
    }
    let t = (1.0 - r) / (1.0 + r);
    let ft = f.try_eval(t)?;
    if ft == 0.0 {
        return Err(domain(format!("{} vanishes at t = {t}", f.name())));
    }
    Ok(r * r * theta.sin() / (ft * (1.0 - r * r).sqrt() * (1.0 + r)))
}

/// Worst self-adjointness residual over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfAdjointReport {
    /// `max |f(t) - t f(1/t)| / max(1, |f(t)|)`.
    pub max_residual: f64,
    pub worst_t: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Checks `f(t) = t f(1/t)` on `grid`.
///
/// Residuals are absolute while `|f(t)| <= 1` and relative above, since the
/// derived family reaches magnitudes where an absolute 1e-10 is below the
/// spacing of doubles.
pub fn check_self_adjoint(f: &ScalarFunction, grid: &[f64]) -> Result<SelfAdjointReport> {
    let mut worst = (0.0f64, f64::NAN);
    for &t in grid {
        if !(t > 0.0) {
            return Err(domain(format!("self-adjointness grid needs t > 0, got {t}")));
        }
        let lhs = f.try_eval(t)?;
        let rhs = t * f.try_eval(1.0 / t)?;
        let res = (lhs - rhs).abs() / lhs.abs().max(1.0);
        if res > worst.0 || worst.1.is_nan() {
            worst = (res, t);
        }
    }
    Ok(SelfAdjointReport {
        max_residual: worst.0,
        worst_t: worst.1,
        threshold: tol::SELF_ADJOINT,
        passed: worst.0 < tol::SELF_ADJOINT,
    })
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
            .collect(),
    }
}

/// `n` uniformly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Increasing,
    Decreasing,
    NonMonotone,
    Constant,
}

/// Scalar monotonicity of a function on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityProfile {
    pub interval: (f64, f64),
    pub direction: Direction,
    pub grid_size: usize,
    /// Largest step against the reported direction (for non-monotone, the
    /// smaller of the largest rise and the largest fall).
    pub max_violation: f64,
}

/// Classifies `f` on `[lo, hi]` from the signs of its steps on `n` grid points.
///
/// Steps within [`tol::MONOTONE_STEP`] of zero count as flat.
pub fn monotonicity_profile(f: &ScalarFunction, lo: f64, hi: f64, n: usize) -> Result<MonotonicityProfile> {
    if !(lo > 0.0 && lo < hi) {
        return Err(invalid(format!("profile needs 0 < lo < hi, got ({lo}, {hi})")));
    }
    if n < 2 {
        return Err(invalid("profile needs at least two grid points"));
    }
    let values = linear_grid(lo, hi, n)
        .into_iter()
        .map(|t| f.try_eval(t))
        .collect::<Result<Vec<_>>>()?;
    let (mut rise, mut fall) = (0.0f64, 0.0f64);
    for w in values.windows(2) {
        let step = w[1] - w[0];
        rise = rise.max(step);
        fall = fall.max(-step);
    }
    let up = rise > tol::MONOTONE_STEP;
    let down = fall > tol::MONOTONE_STEP;
    let (direction, max_violation) = match (up, down) {
        (true, false) => (Direction::Increasing, fall),
        (false, true) => (Direction::Decreasing, rise),
        (true, true) => (Direction::NonMonotone, rise.min(fall)),
        (false, false) => (Direction::Constant, rise.max(fall)),
    };
    Ok(MonotonicityProfile { interval: (lo, hi), direction, grid_size: n, max_violation })
}

/// `y f(x/y)`, the reciprocal of the Morozova-Chentsov function.
pub fn chentsov_mean(f: &ScalarFunction, x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(domain(format!("means need x, y > 0, got ({x}, {y})")));
    }
    Ok(y * f.try_eval(x / y)?)
}

/// Root fidelity `tr sqrt(sqrt(rho1) rho2 sqrt(rho1))`.
pub fn root_fidelity(rho1: &Matrix2C, rho2: &Matrix2C) -> Result<f64> {
    for rho in [rho1, rho2] {
        if !rho.is_density(tol::STRUCTURE) {
            return Err(Error::NotADensityMatrix(format!("{rho}")));
        }
    }
    let clamped_sqrt = |t: f64| Ok(t.max(0.0).sqrt());
    let s = linalg::apply_matrix_function(clamped_sqrt, rho1)?;
    let inner = s * *rho2 * s;
    let inner = (inner + inner.adjoint()).scale(0.5);
    let sp = linalg::eigendecompose(&inner)?;
    Ok((sp.d1.max(0.0).sqrt() + sp.d2.max(0.0).sqrt()).min(1.0))
}

/// Bures distance `sqrt(2 - 2 sqrt(F))`, with `F` the squared root fidelity.
pub fn bures_distance(rho1: &Matrix2C, rho2: &Matrix2C) -> Result<f64> {
    let root_f = root_fidelity(rho1, rho2)?;
    Ok((2.0 - 2.0 * root_f).max(0.0).sqrt())
}

/// Depolarizing channel `p rho + (1 - p) I/2`.
pub fn depolarize(p: f64, rho: &Matrix2C) -> Result<Matrix2C> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("depolarizing parameter must lie in [0, 1], got {p}")));
    }
    if !rho.is_density(tol::STRUCTURE) {
        return Err(Error::NotADensityMatrix(format!("{rho}")));
    }
    Ok(rho.scale(p) + Matrix2C::maximally_mixed().scale(1.0 - p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{bloch_to_matrix, BlochVector};
    use crate::measures::zhsl_density_spherical;
    use std::f64::consts::SQRT_2;

    #[test]
    fn bures_volume_element_closed_form() {
        let f = ScalarFunction::bures();
        for r in [0.05, 0.3, 0.77, 0.95] {
            for theta in [0.1, 1.0, 2.5] {
                let want = r * r * f64::sin(theta) / (1.0 - r * r).sqrt();
                let got = volume_element(&f, r, theta).unwrap();
                assert!((got - want).abs() <= 1e-14 * want);
            }
        }
        assert_eq!(volume_element(&f, 0.4, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn volume_element_errors() {
        let f = ScalarFunction::bures();
        assert!(volume_element(&f, 0.0, 1.0).is_err());
        assert!(volume_element(&f, 1.0, 1.0).is_err());
        // derived f vanishes at t = 1, i.e. r = 0, which is excluded already;
        // a function vanishing inside the range is rejected
        let zeroed = ScalarFunction::identity();
        assert!(volume_element(&zeroed, 0.5, 1.0).is_ok());
    }

    #[test]
    fn derived_volume_element_tracks_density() {
        for nu in [0.5, 1.0, 2.0, 5.0] {
            let f = ScalarFunction::derived(nu).unwrap();
            let base = volume_element(&f, 0.5, 1.0).unwrap() / zhsl_density_spherical(nu, 0.5, 1.0).unwrap();
            for (r, th) in [(0.1, 0.3), (0.9, 2.9), (0.45, 1.7)] {
                let ratio = volume_element(&f, r, th).unwrap() / zhsl_density_spherical(nu, r, th).unwrap();
                assert!((ratio / base - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn self_adjoint_checks() {
        let grid = log_grid(1e-3, 1e3, 301);
        for nu in [0.5, 1.0, 2.0, 5.0] {
            let f = ScalarFunction::derived(nu).unwrap();
            assert!(check_self_adjoint(&f, &grid).unwrap().passed, "nu = {nu}");
        }
        assert!(check_self_adjoint(&ScalarFunction::bures(), &grid).unwrap().passed);
        let sq = check_self_adjoint(&ScalarFunction::square(), &[2.0]).unwrap();
        // |4 - 2 * 1/4| / 4
        assert!(!sq.passed);
        assert!((sq.max_residual - 0.875).abs() < 1e-15);
        assert!(!check_self_adjoint(&ScalarFunction::identity(), &grid).unwrap().passed);
        assert!(check_self_adjoint(&ScalarFunction::sqrt(), &[0.0]).is_err());
    }

    #[test]
    fn profiles() {
        let d1 = ScalarFunction::derived(1.0).unwrap();
        let p = monotonicity_profile(&d1, 0.001, 0.999, 10_000).unwrap();
        assert_eq!(p.direction, Direction::Decreasing);
        let p = monotonicity_profile(&d1, 1.001, 50.0, 10_000).unwrap();
        assert_eq!(p.direction, Direction::Increasing);
        let p = monotonicity_profile(&ScalarFunction::bures(), 0.001, 50.0, 10_000).unwrap();
        assert_eq!(p.direction, Direction::Increasing);
        assert_eq!(p.max_violation, 0.0);
        let p = monotonicity_profile(&d1, 0.1, 10.0, 100).unwrap();
        assert_eq!(p.direction, Direction::NonMonotone);
        assert!(monotonicity_profile(&d1, 0.0, 1.0, 10).is_err());
        assert!(monotonicity_profile(&d1, 0.5, 1.0, 1).is_err());
    }

    #[test]
    fn means() {
        let b = ScalarFunction::bures();
        assert!((chentsov_mean(&b, 2.0, 6.0).unwrap() - 4.0).abs() < 1e-15);
        let d1 = ScalarFunction::derived(1.0).unwrap();
        let (x, y) = (0.3f64, 1.7f64);
        let want = (x - y).powi(2) / (4.0 * (x * y).sqrt());
        assert!((chentsov_mean(&d1, x, y).unwrap() - want).abs() < 1e-14);
        let half = ScalarFunction::derived(0.5).unwrap();
        let want = (x - y).powi(2) / (2.0 * (x + y));
        assert!((chentsov_mean(&half, x, y).unwrap() - want).abs() < 1e-14);
        assert_eq!(chentsov_mean(&d1, 0.8, 0.8).unwrap(), 0.0);
        assert!(chentsov_mean(&b, 0.0, 1.0).is_err());
    }

    #[test]
    fn bures_distance_examples() {
        let rho = bloch_to_matrix(&BlochVector::new(0.1, -0.3, 0.5).unwrap());
        assert!(bures_distance(&rho, &rho).unwrap() < 1e-7);
        let d = bures_distance(&Matrix2C::diag(1.0, 0.0), &Matrix2C::diag(0.0, 1.0)).unwrap();
        assert!((d - SQRT_2).abs() < 1e-15);
        let mixed = Matrix2C::maximally_mixed();
        assert_eq!(bures_distance(&mixed, &mixed).unwrap(), 0.0);
        assert!(bures_distance(&Matrix2C::diag(2.0, 0.0), &mixed).is_err());
    }

    #[test]
    fn bures_distance_matches_qubit_closed_form() {
        // for qubits, tr sqrt(M) = sqrt(tr M + 2 sqrt(det M)) with M = sqrt(a) b sqrt(a),
        // so F = tr(a b) + 2 sqrt(det a det b)
        let a = bloch_to_matrix(&BlochVector::new(0.2, 0.4, -0.1).unwrap());
        let b = bloch_to_matrix(&BlochVector::new(-0.5, 0.1, 0.6).unwrap());
        let fid = (a * b).trace().re + 2.0 * (a.det().re * b.det().re).sqrt();
        let want = (2.0 - 2.0 * fid.sqrt()).sqrt();
        assert!((bures_distance(&a, &b).unwrap() - want).abs() < 1e-14);
        assert!((bures_distance(&b, &a).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn depolarize_examples() {
        let rho = bloch_to_matrix(&BlochVector::new(0.5, 0.0, 0.0).unwrap());
        assert_eq!(depolarize(1.0, &rho).unwrap(), rho);
        assert_eq!(depolarize(0.0, &rho).unwrap(), Matrix2C::maximally_mixed());
        let half = depolarize(0.5, &rho).unwrap();
        let b = linalg::matrix_to_bloch(&half).unwrap();
        assert!((b.x() - 0.25).abs() < 1e-15 && b.y() == 0.0 && b.z() == 0.0);
        assert!(depolarize(1.5, &rho).is_err());
        assert!(depolarize(0.5, &Matrix2C::diag(1.0, 1.0)).is_err());
    }

    #[test]
    fn grids() {
        let g = log_grid(1e-3, 1e3, 7);
        assert_eq!(g.len(), 7);
        assert!((g[3] - 1.0).abs() < 1e-15 && (g[6] - 1e3).abs() < 1e-9);
        assert_eq!(linear_grid(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
    }
}
