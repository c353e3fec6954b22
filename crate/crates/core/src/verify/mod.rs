//! Monte Carlo and quadrature checks tying the samplers to the analytic
//! densities, plus the deterministic identity checks of the monotone module.
//!
//! Every check takes an explicit seed. Batches follow the worker-splitting
//! contract of [`crate::rng`]; checks that need two independent batches
//! offset the second seed by [`SEED_STRIDE`].

mod stats;
pub mod suite;

use std::f64::consts::{FRAC_2_PI, PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

pub use stats::{
    chi_square_two_sample, ks_critical_constant, ks_statistic, ks_test, GoFReport, Histogram, TestKind, Verdict,
    MIN_EXPECTED,
};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix2C};
use crate::measures::{self, check_nu, zhsl_density_spherical, ZhslCoordinates, ZhslSampler};
use crate::monotone::{self, ScalarFunction};
use crate::quad;
use crate::rng::{self, RngStream};
use crate::tol;

/// Seed offset between independent batches of one check; larger than any
/// worker count in use, so the worker streams never overlap.
pub const SEED_STRIDE: u64 = 1000;

/// Bins used by the chi-square comparisons.
pub const CHI_SQUARE_BINS: usize = 32;

/// Smallest sample size accepted by the Monte Carlo checks; below it the
/// asymptotic KS critical values are unreliable.
pub const MIN_SAMPLES: usize = 1000;

fn check_samples(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("need at least {MIN_SAMPLES} samples, got {n}")));
    }
    Ok(())
}

/// `P(R <= r)` for the Bloch radius under the product measure with
/// concentration `nu`, by adaptive quadrature of the radial density.
///
/// The substitution `s = 1 - w^(1/nu)` turns `(1 - s^2)^(nu - 1) ds` into the
/// bounded integrand `(2 - w^(1/nu))^(nu - 1) dw / nu`, which removes the
/// endpoint singularity for `nu < 1`.
pub fn radial_marginal_cdf(nu: f64, r: f64) -> Result<f64> {
    check_nu(nu)?;
    if r.is_nan() {
        return Err(Error::Domain("radius is NaN".into()));
    }
    if r <= 0.0 {
        return Ok(0.0);
    }
    if r >= 1.0 {
        return Ok(1.0);
    }
    let m = 1.0 / nu;
    let norm = 2.0 * (ln_gamma(0.5 + nu) - ln_gamma(nu)).exp() / PI.sqrt();
    let integrand = |w: f64| m * (2.0 - w.powf(m)).powf(nu - 1.0);
    let lower = (1.0 - r).powf(nu);
    let i = quad::integrate(integrand, lower, 1.0, 1e-14, 1e-13, 500)?;
    Ok((norm * i.value).clamp(0.0, 1.0))
}

/// Radii `lambda_max - lambda_min` of `n` draws from `sampler`.
pub fn sample_radii(sampler: ZhslSampler, nu: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    let rhos = measures::sample_batch_with(sampler, nu, n, seed, rng::DEFAULT_WORKERS)?;
    rhos.iter()
        .map(|rho| linalg::eigendecompose(rho).map(|sp| sp.d1 - sp.d2))
        .collect()
}

/// KS test of radii drawn at `sample_nu` against the radial law at `reference_nu`.
pub fn radial_ks(
    sampler: ZhslSampler,
    sample_nu: f64,
    reference_nu: f64,
    n: usize,
    seed: u64,
    alpha: f64,
) -> Result<GoFReport> {
    check_nu(reference_nu)?;
    check_samples(n)?;
    let radii = sample_radii(sampler, sample_nu, n, seed)?;
    ks_test(
        &radii,
        |r| radial_marginal_cdf(reference_nu, r).unwrap_or(f64::NAN),
        alpha,
    )
}

/// End-to-end check that the product-measure sampler realizes the radial law.
pub fn verify_zhsl_radial(nu: f64, n: usize, seed: u64, alpha: f64) -> Result<GoFReport> {
    radial_ks(measures::sample_zhsl, nu, nu, n, seed, alpha)
}

/// Result of [`verify_unitary_invariance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitaryInvarianceReport {
    /// Largest eigenvalue change `|lambda(rho) - lambda(V rho V^dagger)|`.
    pub max_eigenvalue_shift: f64,
    /// Max-eigenvalue histograms of a batch and its conjugate.
    pub paired: GoFReport,
    /// Radius histograms of two independent batches, the second conjugated.
    pub independent: GoFReport,
}

impl UnitaryInvarianceReport {
    pub fn passed(&self) -> bool {
        self.max_eigenvalue_shift < tol::ARITHMETIC && self.paired.passed() && self.independent.passed()
    }
}

/// Checks that conjugation by `v` leaves the product measure unchanged.
pub fn verify_unitary_invariance(
    nu: f64,
    n: usize,
    v: &Matrix2C,
    seed: u64,
    alpha: f64,
) -> Result<UnitaryInvarianceReport> {
    check_samples(n)?;
    let defect = v.unitarity_defect();
    if defect > tol::STRUCTURE || defect.is_nan() {
        return Err(Error::NotUnitary(defect));
    }
    let batch = measures::sample_zhsl_batch(nu, n, seed, rng::DEFAULT_WORKERS)?;
    let mut shift = 0.0f64;
    let mut before = Vec::with_capacity(n);
    let mut after = Vec::with_capacity(n);
    for rho in &batch {
        let s0 = linalg::eigendecompose(rho)?;
        let s1 = linalg::eigendecompose(&linalg::conjugate(v, rho)?)?;
        shift = shift.max((s0.d1 - s1.d1).abs()).max((s0.d2 - s1.d2).abs());
        before.push(s0.d1);
        after.push(s1.d1);
    }
    let paired = chi_square_two_sample(
        &Histogram::uniform(0.5, 1.0, CHI_SQUARE_BINS, &before)?,
        &Histogram::uniform(0.5, 1.0, CHI_SQUARE_BINS, &after)?,
        alpha,
    )?;

    let first: Vec<f64> = batch
        .iter()
        .map(|rho| linalg::eigendecompose(rho).map(|sp| sp.d1 - sp.d2))
        .collect::<Result<_>>()?;
    let second_batch = measures::sample_zhsl_batch(nu, n, seed + SEED_STRIDE, rng::DEFAULT_WORKERS)?;
    let second: Vec<f64> = second_batch
        .iter()
        .map(|rho| {
            let sp = linalg::eigendecompose(&linalg::conjugate(v, rho)?)?;
            Ok(sp.d1 - sp.d2)
        })
        .collect::<Result<_>>()?;
    let independent = chi_square_two_sample(
        &Histogram::uniform(0.0, 1.0, CHI_SQUARE_BINS, &first)?,
        &Histogram::uniform(0.0, 1.0, CHI_SQUARE_BINS, &second)?,
        alpha,
    )?;
    Ok(UnitaryInvarianceReport { max_eigenvalue_shift: shift, paired, independent })
}

/// `|U_11|^2` for `n` Haar-random SU(2) elements (all three angles sampled).
pub fn unitary_column_weights(n: usize, seed: u64) -> Vec<f64> {
    rng::par_sample(n, seed, rng::DEFAULT_WORKERS, |r| {
        linalg::su2_from_euler(&measures::sample_haar_su2(r)).a11.norm_sqr()
    })
}

/// `cos^2(phi)` for `n` uniformly random rotations of the plane.
pub fn orthogonal_column_weights(n: usize, seed: u64) -> Vec<f64> {
    rng::par_sample(n, seed, rng::DEFAULT_WORKERS, |r| {
        let phi = r.random::<f64>() * TAU;
        phi.cos().powi(2)
    })
}

/// CDF of the first Dirichlet component for `n = 2`, `nu = 1`: uniform.
pub fn uniform_cdf(d: f64) -> f64 {
    d.clamp(0.0, 1.0)
}

/// CDF of the first Dirichlet component for `n = 2`, `nu = 1/2`: `(2/pi) arcsin sqrt(d)`.
pub fn arcsine_cdf(d: f64) -> f64 {
    FRAC_2_PI * d.clamp(0.0, 1.0).sqrt().asin()
}

/// KS reports for the column laws of random unitary and orthogonal matrices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HaarColumnReport {
    pub unitary: GoFReport,
    pub orthogonal: GoFReport,
}

impl HaarColumnReport {
    pub fn passed(&self) -> bool {
        self.unitary.passed() && self.orthogonal.passed()
    }
}

/// Squared moduli of a random unitary column follow Dirichlet(1); of a random
/// orthogonal column, Dirichlet(1/2).
pub fn verify_haar_column_dirichlet(n: usize, seed: u64, alpha: f64) -> Result<HaarColumnReport> {
    check_samples(n)?;
    let unitary = ks_test(&unitary_column_weights(n, seed), uniform_cdf, alpha)?;
    let orthogonal = ks_test(&orthogonal_column_weights(n, seed + SEED_STRIDE), arcsine_cdf, alpha)?;
    Ok(HaarColumnReport { unitary, orthogonal })
}

/// Relative spread `(max - min) / |mean|` of a set of ratios.
pub fn relative_spread(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (hi - lo) / mean.abs()
}

/// The `(r, theta)` grid of the reconstruction check: `r = 0.05, ..., 0.95`
/// and `theta = 0.1, ..., 3.0`.
pub fn reconstruction_grid() -> Vec<(f64, f64)> {
    (1..=19)
        .flat_map(|i| (1..=30).map(move |j| (0.05 * i as f64, 0.1 * j as f64)))
        .collect()
}

/// Relative spread of `volume_element(derived_f(nu)) / q~_nu` over the grid.
pub fn reconstruction_spread(nu: f64) -> Result<f64> {
    let f = ScalarFunction::derived(nu)?;
    let ratios = reconstruction_grid()
        .into_iter()
        .map(|(r, theta)| Ok(monotone::volume_element(&f, r, theta)? / zhsl_density_spherical(nu, r, theta)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(relative_spread(&ratios))
}

/// Relative spread of `derived_f(nu, t) / shape(t)` over a log grid, used for
/// the `nu = 1` and `nu = 1/2` closed forms.
pub fn special_case_spread(nu: f64, shape: impl Fn(f64) -> f64, grid: &[f64]) -> Result<f64> {
    let ratios = grid
        .iter()
        .filter(|&&t| t != 1.0)
        .map(|&t| Ok(monotone::derived_f(nu, t)? / shape(t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(relative_spread(&ratios))
}

/// Largest deviation of the derived-family means from their closed forms
/// over `pairs` random pairs in `[0.01, 1)`.
pub fn means_max_error(pairs: usize, seed: u64) -> Result<f64> {
    let one = ScalarFunction::derived(1.0)?;
    let half = ScalarFunction::derived(0.5)?;
    let mut rng = RngStream::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let x: f64 = rng.random_range(0.01..1.0);
        let y: f64 = rng.random_range(0.01..1.0);
        let geo = (x - y) * (x - y) / (4.0 * (x * y).sqrt());
        let arith = (x - y) * (x - y) / (2.0 * (x + y));
        worst = worst
            .max((monotone::chentsov_mean(&one, x, y)? - geo).abs())
            .max((monotone::chentsov_mean(&half, x, y)? - arith).abs());
    }
    Ok(worst)
}

/// Outcome of [`bures_contraction`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub comparisons: usize,
    /// Count of `D(after) > D(before) + slack`.
    pub violations: usize,
    /// Largest `D(after) - D(before)` seen.
    pub max_excess: f64,
}

/// Compares Bures distances before and after depolarizing with each `p` for
/// `pairs` random pairs of product-measure states.
pub fn bures_contraction(pairs: usize, ps: &[f64], seed: u64, slack: f64) -> Result<ContractionReport> {
    let a = measures::sample_zhsl_batch(1.0, pairs, seed, rng::DEFAULT_WORKERS)?;
    let b = measures::sample_zhsl_batch(1.0, pairs, seed + SEED_STRIDE, rng::DEFAULT_WORKERS)?;
    let mut report = ContractionReport { comparisons: 0, violations: 0, max_excess: f64::NEG_INFINITY };
    for (r1, r2) in a.iter().zip(&b) {
        let before = monotone::bures_distance(r1, r2)?;
        for &p in ps {
            let after = monotone::bures_distance(&monotone::depolarize(p, r1)?, &monotone::depolarize(p, r2)?)?;
            let excess = after - before;
            report.comparisons += 1;
            report.max_excess = report.max_excess.max(excess);
            if excess > slack {
                report.violations += 1;
            }
        }
    }
    Ok(report)
}

/// Largest entrywise difference between states rebuilt with `gamma = 0` and
/// with a random `gamma`, over `n` random coordinates.
pub fn gamma_dropout(n: usize, seed: u64) -> Result<f64> {
    let mut rng = RngStream::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let c = ZhslCoordinates::new(
            linalg::wrap_angle(rng.random::<f64>() * TAU),
            rng.random::<f64>() * PI,
            0.5 * rng.random::<f64>(),
        )?;
        let gamma = rng.random::<f64>() * TAU;
        let with = measures::zhsl_to_density_with_gamma(&c, gamma);
        worst = worst.max(with.max_abs_diff(&measures::zhsl_to_density(&c)));
    }
    Ok(worst)
}
