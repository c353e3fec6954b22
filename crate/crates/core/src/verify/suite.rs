//! The full verification suite and its manifest.
//!
//! Manifest schema: a map from check name to
//! `{verdict, statistic, threshold, n, seed}`, ordered by check name.
//! Statistical checks report their test statistic; identity checks report a
//! residual against a fixed tolerance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::*;
use crate::linalg::su2_from_angles;

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Concentration of the batches in the unitary-invariance check.
    pub nu: f64,
    /// Sample size of every Monte Carlo check.
    pub n: usize,
    pub alpha: f64,
    /// Single-draw sampler behind the radial checks.
    pub sampler: ZhslSampler,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 42, nu: 1.0, n: 100_000, alpha: 0.01, sampler: measures::sample_zhsl }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub verdict: Verdict,
    pub statistic: f64,
    pub threshold: f64,
    pub n: usize,
    pub seed: u64,
}

impl ManifestEntry {
    fn from_gof(r: &GoFReport, seed: u64) -> Self {
        Self { verdict: r.verdict, statistic: r.statistic, threshold: r.threshold, n: r.n, seed }
    }

    fn residual(statistic: f64, threshold: f64, n: usize, seed: u64) -> Self {
        Self {
            verdict: Verdict::from_bool(statistic < threshold),
            statistic,
            threshold,
            n,
            seed,
        }
    }
}

pub type Manifest = BTreeMap<String, ManifestEntry>;

/// Names of failing checks, in manifest order.
pub fn failures(m: &Manifest) -> Vec<&str> {
    m.iter()
        .filter(|(_, e)| !e.verdict.passed())
        .map(|(k, _)| k.as_str())
        .collect()
}

/// Fixed non-trivial unitary used by the invariance check.
pub fn invariance_unitary() -> Matrix2C {
    su2_from_angles(1.1, 0.7, 2.3)
}

pub const TESTED_NUS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const RADIAL_NUS: [f64; 3] = [0.5, 1.0, 2.0];
pub const DEPOLARIZING_PS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Runs every check. Check `i` draws from seeds starting at `cfg.seed + 2 i SEED_STRIDE`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Manifest> {
    let mut m = Manifest::new();
    let mut next = 0u64;
    let mut seed = || {
        let s = cfg.seed + next * SEED_STRIDE * 2;
        next += 1;
        s
    };

    for nu in RADIAL_NUS {
        let s = seed();
        let r = radial_ks(cfg.sampler, nu, nu, cfg.n, s, cfg.alpha)?;
        m.insert(format!("radial_ks/nu={nu}"), ManifestEntry::from_gof(&r, s));
    }

    let s = seed();
    let inv = verify_unitary_invariance(cfg.nu, cfg.n, &invariance_unitary(), s, cfg.alpha)?;
    m.insert(
        "unitary_invariance/eigenvalue_shift".into(),
        ManifestEntry::residual(inv.max_eigenvalue_shift, tol::ARITHMETIC, cfg.n, s),
    );
    m.insert("unitary_invariance/paired".into(), ManifestEntry::from_gof(&inv.paired, s));
    m.insert("unitary_invariance/independent".into(), ManifestEntry::from_gof(&inv.independent, s));

    let s = seed();
    let haar = verify_haar_column_dirichlet(cfg.n, s, cfg.alpha)?;
    m.insert("haar_column/unitary".into(), ManifestEntry::from_gof(&haar.unitary, s));
    m.insert("haar_column/orthogonal".into(), ManifestEntry::from_gof(&haar.orthogonal, s));

    let grid = reconstruction_grid().len();
    let spread = TESTED_NUS
        .iter()
        .map(|&nu| reconstruction_spread(nu))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    m.insert(
        "reconstruction_identity".into(),
        ManifestEntry::residual(spread, 1e-9, grid * TESTED_NUS.len(), cfg.seed),
    );

    let t_grid = monotone::log_grid(1e-3, 1e3, 1001);
    let sa = TESTED_NUS
        .iter()
        .map(|&nu| monotone::check_self_adjoint(&ScalarFunction::derived(nu)?, &t_grid).map(|r| r.max_residual))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    m.insert(
        "self_adjoint".into(),
        ManifestEntry::residual(sa, tol::SELF_ADJOINT, t_grid.len() * TESTED_NUS.len(), cfg.seed),
    );

    let s = seed();
    let means = means_max_error(1000, s)?;
    m.insert("means_identities".into(), ManifestEntry::residual(means, 1e-12, 1000, s));

    let s = seed();
    let pairs = 10_000;
    let c = bures_contraction(pairs, &DEPOLARIZING_PS, s, 1e-10)?;
    m.insert(
        "bures_contraction".into(),
        ManifestEntry::residual(c.max_excess, 1e-10, c.comparisons, s),
    );

    let s = seed();
    let g = gamma_dropout(1000, s)?;
    m.insert("gamma_dropout".into(), ManifestEntry::residual(g, tol::ARITHMETIC, 1000, s));

    Ok(m)
}
