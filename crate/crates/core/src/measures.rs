//! Measures on qubit density matrices.
//!
//! A density matrix is written `rho = U diag(d1, d2) U^dagger`. The measures
//! here put the symmetric Dirichlet law of concentration `nu` on the
//! eigenvalues and the Haar law on `U`. At `nu = 1` this is the product of the
//! uniform simplex measure and Haar measure; pushed forward to the Bloch ball
//! it has density
//!
//! ```text
//! q_nu(x, y, z) = Gamma(1/2 + nu) (1 - r^2)^(nu - 1) / (2 pi^(3/2) Gamma(nu) r^2)
//! ```
//!
//! with `r^2 = x^2 + y^2 + z^2`.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, invalid, Error, Result};
use crate::linalg::{self, wrap_angle, BlochVector, EulerAngles, Matrix2C};
use crate::rng::{self, RngStream};
use crate::tol;

/// Symmetric Dirichlet parameters: concentration `nu` on an `n`-point simplex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirichletParams {
    nu: f64,
    n: usize,
}

impl DirichletParams {
    pub fn new(nu: f64, n: usize) -> Result<Self> {
        check_nu(nu)?;
        if n < 2 {
            return Err(invalid(format!("simplex needs n >= 2 components, got {n}")));
        }
        Ok(Self { nu, n })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Mean of each component, `1/n`.
    pub fn mean(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Variance of each component, `(n - 1) / (n^2 (n nu + 1))`.
    pub fn variance(&self) -> f64 {
        let n = self.n as f64;
        (n - 1.0) / (n * n * (n * self.nu + 1.0))
    }
}

pub(crate) fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("concentration must satisfy nu > 0, got {nu}")))
    }
}

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint {
    weights: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput);
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(invalid("simplex weights must be non-negative"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tol::ARITHMETIC {
            return Err(invalid(format!("simplex weights sum to {sum}, not 1")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Economized coordinates `(alpha, beta, d1)` of a qubit state.
///
/// `d1 = (1 - r)/2` is the smaller eigenvalue, `beta = arccos(-z/r)` and
/// `alpha = -arg(x + i y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZhslCoordinates {
    alpha: f64,
    beta: f64,
    d1: f64,
}

impl ZhslCoordinates {
    pub fn new(alpha: f64, beta: f64, d1: f64) -> Result<Self> {
        if !(0.0..TAU).contains(&alpha) {
            return Err(invalid(format!("alpha = {alpha} outside [0, 2pi)")));
        }
        if !(0.0..=PI).contains(&beta) {
            return Err(invalid(format!("beta = {beta} outside [0, pi]")));
        }
        if !(0.0..=0.5).contains(&d1) {
            return Err(invalid(format!("d1 = {d1} outside [0, 1/2]")));
        }
        Ok(Self { alpha, beta, d1 })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn d1(&self) -> f64 {
        self.d1
    }
}

/// `Gamma(n nu) / Gamma(nu)^n * prod d_i^(nu - 1)`.
pub fn dirichlet_density(p: &DirichletParams, s: &SimplexPoint) -> Result<f64> {
    if s.len() != p.n {
        return Err(invalid(format!(
            "point has {} components, parameters expect {}",
            s.len(),
            p.n
        )));
    }
    let n = p.n as f64;
    let log_norm = ln_gamma(n * p.nu) - n * ln_gamma(p.nu);
    if p.nu == 1.0 {
        return Ok(log_norm.exp());
    }
    if s.weights.contains(&0.0) {
        return if p.nu < 1.0 {
            Err(domain("Dirichlet density diverges on the simplex boundary for nu < 1"))
        } else {
            Ok(0.0)
        };
    }
    let log_prod: f64 = s.weights.iter().map(|w| w.ln()).sum();
    Ok((log_norm + (p.nu - 1.0) * log_prod).exp())
}

/// Draws from the symmetric Dirichlet law.
///
/// Two components use `Beta(nu, nu)`; more use normalized `Gamma(nu, 1)`
/// variates. The last weight is `1 - sum(others)`.
pub fn sample_dirichlet(p: &DirichletParams, rng: &mut RngStream) -> SimplexPoint {
    let mut w = if p.n == 2 {
        // params validated on construction
        let beta = Beta::new(p.nu, p.nu).expect("valid beta parameters");
        let d = beta.sample(rng);
        vec![d, 0.0]
    } else {
        let gamma = Gamma::new(p.nu, 1.0).expect("valid gamma parameters");
        let mut g: Vec<f64> = (0..p.n).map(|_| gamma.sample(rng)).collect();
        let sum: f64 = g.iter().sum();
        if sum > 0.0 {
            g.iter_mut().for_each(|x| *x /= sum);
        } else {
            // every variate underflowed; put the mass on one vertex at random
            g.iter_mut().for_each(|x| *x = 0.0);
            let k = rng.random_range(0..p.n);
            g[k] = 1.0;
        }
        g
    };
    let head: f64 = w[..p.n - 1].iter().sum();
    w[p.n - 1] = (1.0 - head).max(0.0);
    SimplexPoint { weights: w }
}

/// Haar-random Euler angles: `alpha, gamma` uniform and `cos(beta)` uniform on `[-1, 1]`.
pub fn sample_haar_su2(rng: &mut RngStream) -> EulerAngles {
    let alpha = wrap_angle(rng.random::<f64>() * TAU);
    let cos_beta = 2.0 * rng.random::<f64>() - 1.0;
    let gamma = wrap_angle(rng.random::<f64>() * TAU);
    EulerAngles::new(alpha, cos_beta.acos(), gamma).expect("angles in range by construction")
}

/// One draw `U diag(d1, d2) U^dagger` with `U` Haar and `(d1, d2)` Dirichlet(`nu`).
pub fn sample_zhsl(nu: f64, rng: &mut RngStream) -> Result<Matrix2C> {
    let p = DirichletParams::new(nu, 2)?;
    Ok(draw_zhsl(&p, rng))
}

fn draw_zhsl(p: &DirichletParams, rng: &mut RngStream) -> Matrix2C {
    let u = linalg::su2_from_euler(&sample_haar_su2(rng));
    let d = sample_dirichlet(p, rng);
    u * Matrix2C::diag(d.weights[0], d.weights[1]) * u.adjoint()
}

/// Signature shared by single-draw density matrix samplers.
pub type ZhslSampler = fn(f64, &mut RngStream) -> Result<Matrix2C>;

/// `n` draws of [`sample_zhsl`] spread over `workers` seeded streams.
pub fn sample_zhsl_batch(nu: f64, n: usize, seed: u64, workers: usize) -> Result<Vec<Matrix2C>> {
    sample_batch_with(sample_zhsl, nu, n, seed, workers)
}

/// Batch sampling through an arbitrary single-draw sampler.
pub fn sample_batch_with(
    sampler: ZhslSampler,
    nu: f64,
    n: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<Matrix2C>> {
    check_nu(nu)?;
    rng::try_par_sample(n, seed, workers, |r| sampler(nu, r))
}

/// `Gamma(1/2 + nu) / (2 pi^(3/2) Gamma(nu))`.
pub fn zhsl_normalization(nu: f64) -> f64 {
    (ln_gamma(0.5 + nu) - ln_gamma(nu)).exp() / (2.0 * PI.powf(1.5))
}

fn radial_factor(nu: f64, r: f64) -> Result<f64> {
    if r >= 1.0 {
        if nu < 1.0 {
            return Err(domain("density diverges on the unit sphere for nu < 1"));
        }
        if r > 1.0 {
            return Err(domain(format!("radius {r} outside the Bloch ball")));
        }
    }
    let s = 1.0 - r * r;
    Ok(if nu == 1.0 { 1.0 } else { s.powf(nu - 1.0) })
}

/// Density of the generalized product measure in Cartesian Bloch coordinates.
pub fn zhsl_density_cartesian(nu: f64, b: &BlochVector) -> Result<f64> {
    check_nu(nu)?;
    let r2 = b.x() * b.x() + b.y() * b.y() + b.z() * b.z();
    if r2 == 0.0 {
        return Err(domain("density is singular at the origin"));
    }
    let r = r2.sqrt();
    Ok(zhsl_normalization(nu) * radial_factor(nu, r.min(1.0))? / r2)
}

/// The same density in spherical coordinates `(r, theta, phi)`; it carries the
/// Jacobian `r^2 sin(theta)` and does not depend on `phi`.
pub fn zhsl_density_spherical(nu: f64, r: f64, theta: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(domain(format!("radius {r} outside [0, 1]")));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(domain(format!("theta = {theta} outside [0, pi]")));
    }
    Ok(zhsl_normalization(nu) * radial_factor(nu, r)? * theta.sin())
}

/// Marginal density of `r`: `2 Gamma(1/2 + nu) (1 - r^2)^(nu - 1) / (sqrt(pi) Gamma(nu))`.
pub fn radial_marginal_density(nu: f64, r: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(domain(format!("radius {r} outside [0, 1]")));
    }
    Ok(4.0 * PI * zhsl_normalization(nu) * radial_factor(nu, r)?)
}

/// Economized coordinates of an off-axis Bloch vector.
pub fn bloch_to_zhsl(b: &BlochVector) -> Result<ZhslCoordinates> {
    let r = b.r();
    if r == 0.0 {
        return Err(Error::DegenerateInput("alpha and beta are undefined at the origin".into()));
    }
    if b.x() == 0.0 && b.y() == 0.0 {
        return Err(Error::DegenerateInput("alpha is undefined on the z-axis".into()));
    }
    let r = r.min(1.0);
    let alpha = wrap_angle(-b.y().atan2(b.x()));
    let beta = (-b.z() / b.r()).clamp(-1.0, 1.0).acos();
    ZhslCoordinates::new(alpha, beta, 0.5 * (1.0 - r))
}

/// `U diag(d1, 1 - d1) U^dagger` with `U` the SU(2) element of Euler angles
/// `(pi - alpha, beta, 0)`.
///
/// The transformation to `(alpha, beta, d1)` is only fixed up to an orientation
/// convention; pairing it with the Euler matrix requires the reflection
/// `alpha -> pi - alpha`, which preserves the uniform law of `alpha`. With it,
/// `zhsl_to_density(bloch_to_zhsl(b)) == bloch_to_matrix(b)`.
pub fn zhsl_to_density(c: &ZhslCoordinates) -> Matrix2C {
    zhsl_to_density_with_gamma(c, 0.0)
}

/// [`zhsl_to_density`] with an explicit third Euler angle, which drops out.
pub fn zhsl_to_density_with_gamma(c: &ZhslCoordinates, gamma: f64) -> Matrix2C {
    let u = linalg::su2_from_angles(PI - c.alpha, c.beta, gamma);
    u * Matrix2C::diag(c.d1, 1.0 - c.d1) * u.adjoint()
}

/// One row of a sample file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub d1: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl SampleRecord {
    pub const HEADER: [&'static str; 6] = ["x", "y", "z", "d1", "alpha", "beta"];

    pub fn from_density(rho: &Matrix2C) -> Result<Self> {
        let b = linalg::matrix_to_bloch(rho)?;
        let c = bloch_to_zhsl(&b)?;
        Ok(Self {
            x: b.x(),
            y: b.y(),
            z: b.z(),
            d1: c.d1,
            alpha: c.alpha,
            beta: c.beta,
        })
    }

    pub fn values(&self) -> [f64; 6] {
        [self.x, self.y, self.z, self.d1, self.alpha, self.beta]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{bloch_to_matrix, eigendecompose};
    use approx::assert_relative_eq;

    #[test]
    fn dirichlet_density_examples() {
        let p = DirichletParams::new(1.0, 2).unwrap();
        let s = SimplexPoint::new(vec![0.3, 0.7]).unwrap();
        assert_relative_eq!(dirichlet_density(&p, &s).unwrap(), 1.0, epsilon = 1e-14);

        let p = DirichletParams::new(1.0, 3).unwrap();
        let s = SimplexPoint::new(vec![0.2, 0.5, 0.3]).unwrap();
        assert_relative_eq!(dirichlet_density(&p, &s).unwrap(), 2.0, epsilon = 1e-14);

        let p = DirichletParams::new(0.5, 2).unwrap();
        let s = SimplexPoint::new(vec![0.25, 0.75]).unwrap();
        let want = (1.0 / PI) * (4.0 / 3f64.sqrt());
        assert_relative_eq!(dirichlet_density(&p, &s).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn dirichlet_boundary() {
        let edge = SimplexPoint::new(vec![0.0, 1.0]).unwrap();
        let half = DirichletParams::new(0.5, 2).unwrap();
        assert!(matches!(dirichlet_density(&half, &edge), Err(Error::Domain(_))));
        let two = DirichletParams::new(2.0, 2).unwrap();
        assert_eq!(dirichlet_density(&two, &edge).unwrap(), 0.0);
        let one = DirichletParams::new(1.0, 2).unwrap();
        assert_relative_eq!(dirichlet_density(&one, &edge).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn parameter_validation() {
        assert!(DirichletParams::new(0.0, 2).is_err());
        assert!(DirichletParams::new(f64::NAN, 2).is_err());
        assert!(DirichletParams::new(1.0, 1).is_err());
        assert!(SimplexPoint::new(vec![0.5, 0.6]).is_err());
        assert!(SimplexPoint::new(vec![-0.1, 1.1]).is_err());
        assert!(ZhslCoordinates::new(0.0, 0.0, 0.6).is_err());
        assert!(sample_zhsl(-1.0, &mut RngStream::new(1)).is_err());
    }

    #[test]
    fn sampled_weights_sum_to_one() {
        let mut rng = RngStream::new(3);
        for (nu, n) in [(0.5, 2), (1.0, 3), (2.0, 5), (0.05, 4)] {
            let p = DirichletParams::new(nu, n).unwrap();
            for _ in 0..200 {
                let s = sample_dirichlet(&p, &mut rng);
                let sum: f64 = s.weights().iter().sum();
                assert!((sum - 1.0).abs() < 1e-15);
                assert!(s.weights().iter().all(|&w| w >= 0.0));
            }
        }
    }

    #[test]
    fn zhsl_draw_is_density() {
        let mut rng = RngStream::new(11);
        for _ in 0..1000 {
            let rho = sample_zhsl(0.5, &mut rng).unwrap();
            assert!(rho.is_density(tol::STRUCTURE));
        }
    }

    #[test]
    fn cartesian_density_at_half_radius() {
        // Gamma(3/2) / (2 pi^(3/2) * 1/4) = 1/pi
        let b = BlochVector::new(0.0, 0.3, 0.4).unwrap();
        assert_relative_eq!(zhsl_density_cartesian(1.0, &b).unwrap(), 1.0 / PI, max_relative = 1e-14);
    }

    #[test]
    fn density_domain_errors() {
        assert!(matches!(
            zhsl_density_cartesian(1.0, &BlochVector::origin()),
            Err(Error::Domain(_))
        ));
        let pole = BlochVector::new(0.0, 0.0, 1.0).unwrap();
        assert!(zhsl_density_cartesian(0.5, &pole).is_err());
        assert!(zhsl_density_cartesian(2.0, &pole).unwrap() == 0.0);
        assert!(zhsl_density_spherical(0.5, 1.0, 1.0).is_err());
        assert!(zhsl_density_spherical(1.0, 1.2, 1.0).is_err());
        assert_eq!(zhsl_density_spherical(3.0, 0.4, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn jacobian_identity() {
        for nu in [0.5, 1.0, 2.0, 5.0] {
            for i in 1..20 {
                let r = i as f64 * 0.05;
                for j in 0..=10 {
                    let theta = j as f64 * PI / 10.0;
                    let b = BlochVector::from_spherical(r, theta, 0.3 * j as f64).unwrap();
                    let cart = zhsl_density_cartesian(nu, &b).unwrap();
                    let sph = zhsl_density_spherical(nu, r, theta).unwrap();
                    assert!((sph - cart * r * r * theta.sin()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn zhsl_coordinates_example() {
        let c = bloch_to_zhsl(&BlochVector::new(0.5, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(c.alpha(), 0.0);
        assert!((c.beta() - PI / 2.0).abs() < 1e-15);
        assert_eq!(c.d1(), 0.25);

        let rho = zhsl_to_density(&ZhslCoordinates::new(0.0, PI / 2.0, 0.25).unwrap());
        assert!(rho.max_abs_diff(&Matrix2C::real(0.5, 0.25, 0.25, 0.5)) < 1e-15);

        let mixed = zhsl_to_density(&ZhslCoordinates::new(1.3, 2.2, 0.5).unwrap());
        assert!(mixed.max_abs_diff(&Matrix2C::maximally_mixed()) < 1e-15);
    }

    #[test]
    fn zhsl_coordinates_degenerate() {
        for b in [BlochVector::new(0.0, 0.0, 0.4).unwrap(), BlochVector::origin()] {
            assert!(matches!(bloch_to_zhsl(&b), Err(Error::DegenerateInput(_))));
        }
    }

    #[test]
    fn record_from_density() {
        let b = BlochVector::new(-0.2, 0.1, 0.3).unwrap();
        let rec = SampleRecord::from_density(&bloch_to_matrix(&b)).unwrap();
        assert!((rec.x + 0.2).abs() < 1e-15 && (rec.y - 0.1).abs() < 1e-15);
        let sp = eigendecompose(&bloch_to_matrix(&b)).unwrap();
        assert!((rec.d1 - sp.d2).abs() < 1e-15);
    }
}
