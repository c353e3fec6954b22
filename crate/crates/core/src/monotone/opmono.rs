//! Randomized search for violations of operator monotonicity.
//!
//! Ordered pairs are built constructively: `K = A^dagger A` and
//! `H = K + B^dagger B` with Gaussian `A, B`, so `K <= H` up to round-off.
//! Both are then mapped into the requested spectral window by the same
//! positive affine map `X -> a I + c X`, which preserves the Loewner order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hermitian::CMatrix;
use super::ScalarFunction;
use crate::error::{domain, invalid, Result};
use crate::rng::{self, RngStream};
use crate::tol;

/// Fraction of the window kept clear at each end.
const MARGIN: f64 = 1e-3;

/// Parameters of an operator-monotonicity run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpMonoConfig {
    pub dim: usize,
    pub trials: usize,
    /// Spectra of `K` and `H` are placed inside this window.
    pub range: (f64, f64),
    pub seed: u64,
    pub workers: usize,
}

impl OpMonoConfig {
    pub fn new(dim: usize, trials: usize, range: (f64, f64), seed: u64) -> Self {
        Self { dim, trials, range, seed, workers: rng::DEFAULT_WORKERS }
    }
}

/// A pair `K <= H` with `f(K) <= f(H)` violated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub k: CMatrix,
    pub h: CMatrix,
    /// Minimum eigenvalue of `f(H) - f(K)`.
    pub min_eigenvalue: f64,
}

impl Counterexample {
    /// Recomputes the pair from scratch: `H - K` must be PSD within
    /// [`tol::PSD_INPUT`] and `f(H) - f(K)` must have an eigenvalue below
    /// `-tol::VIOLATION`.
    pub fn reverify(&self, f: &ScalarFunction) -> Result<bool> {
        let gap = (&self.h - &self.k).min_eigenvalue();
        if gap < -tol::PSD_INPUT {
            return Ok(false);
        }
        let fk = self.k.apply(|t| f.try_eval(t))?;
        let fh = self.h.apply(|t| f.try_eval(t))?;
        Ok((&fh - &fk).min_eigenvalue() < -tol::VIOLATION)
    }
}

/// Outcome of [`operator_monotonicity_test`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorMonotonicityReport {
    pub function: String,
    pub dim: usize,
    pub trials: usize,
    pub violations: usize,
    pub range: (f64, f64),
    pub seed: u64,
    pub worst_counterexample: Option<Counterexample>,
}

impl OperatorMonotonicityReport {
    fn empty(f: &ScalarFunction, cfg: &OpMonoConfig) -> Self {
        Self {
            function: f.name().to_string(),
            dim: cfg.dim,
            trials: 0,
            violations: 0,
            range: cfg.range,
            seed: cfg.seed,
            worst_counterexample: None,
        }
    }

    /// Associative merge: counts add, the more negative counterexample wins
    /// (ties keep `self`).
    pub fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.violations += other.violations;
        self.worst_counterexample = match (self.worst_counterexample, other.worst_counterexample) {
            (Some(a), Some(b)) => Some(if b.min_eigenvalue < a.min_eigenvalue { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }

    /// True when no violation was found.
    pub fn looks_monotone(&self) -> bool {
        self.violations == 0
    }
}

/// Random ordered pair `K <= H` with both spectra inside `[lo', hi']`.
fn ordered_pair(dim: usize, window: (f64, f64), rng: &mut RngStream) -> (CMatrix, CMatrix) {
    let a = CMatrix::random_gaussian(dim, rng);
    let b = CMatrix::random_gaussian(dim, rng);
    let k = (&a.adjoint() * &a).hermitian_part();
    let h = (&k + &(&b.adjoint() * &b)).hermitian_part();
    let (lo, hi) = window;
    let top = h.max_eigenvalue().max(f64::MIN_POSITIVE);
    let c = (hi - lo) / top;
    (k.scale(c).shift(lo), h.scale(c).shift(lo))
}

/// Counts trials where `f(H) - f(K)` has an eigenvalue below `-tol::VIOLATION`.
pub fn operator_monotonicity_test(
    f: &ScalarFunction,
    cfg: &OpMonoConfig,
) -> Result<OperatorMonotonicityReport> {
    if !(1..=3).contains(&cfg.dim) {
        return Err(invalid(format!("dim must be 1, 2 or 3, got {}", cfg.dim)));
    }
    if cfg.trials == 0 {
        return Err(invalid("need at least one trial"));
    }
    let (lo, hi) = cfg.range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(invalid(format!("invalid spectral range ({lo}, {hi})")));
    }
    let width = hi - lo;
    let window = (lo + MARGIN * width, hi - MARGIN * width);
    if !f.domain().contains_closed(window.0, window.1) {
        return Err(domain(format!(
            "cannot place spectra in ({lo}, {hi}) inside the domain of {}",
            f.name()
        )));
    }

    let blocks = rng::worker_blocks(cfg.trials, cfg.workers);
    let parts = blocks
        .par_iter()
        .enumerate()
        .map(|(w, &len)| {
            let mut rng = RngStream::worker(cfg.seed, w);
            let mut report = OperatorMonotonicityReport::empty(f, cfg);
            for _ in 0..len {
                let (k, h) = ordered_pair(cfg.dim, window, &mut rng);
                let fk = k.apply(|t| f.try_eval(t))?;
                let fh = h.apply(|t| f.try_eval(t))?;
                let min_eig = (&fh - &fk).min_eigenvalue();
                report.trials += 1;
                if min_eig < -tol::VIOLATION {
                    report.violations += 1;
                    let worse = report
                        .worst_counterexample
                        .as_ref()
                        .is_none_or(|c| min_eig < c.min_eigenvalue);
                    if worse {
                        report.worst_counterexample = Some(Counterexample { k, h, min_eigenvalue: min_eig });
                    }
                }
            }
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts
        .into_iter()
        .fold(OperatorMonotonicityReport::empty(f, cfg), OperatorMonotonicityReport::merge))
}
