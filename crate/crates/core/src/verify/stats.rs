use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Error, Result};

/// Minimum expected count per chi-square bin; sparser bins are merged.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Ks,
    ChiSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Self::Pass
    }
}

/// Goodness-of-fit outcome; `verdict` is `statistic < threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoFReport {
    pub test: TestKind,
    pub statistic: f64,
    pub threshold: f64,
    pub alpha: f64,
    pub n: usize,
    pub verdict: Verdict,
}

impl GoFReport {
    pub fn new(test: TestKind, statistic: f64, threshold: f64, alpha: f64, n: usize) -> Self {
        Self {
            test,
            statistic,
            threshold,
            alpha,
            n,
            verdict: Verdict::from_bool(statistic < threshold),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Fixed-edge histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    /// `bins` equal-width bins on `[lo, hi]`; values outside are clamped to
    /// the end bins, NaNs are rejected.
    pub fn uniform(lo: f64, hi: f64, bins: usize, data: &[f64]) -> Result<Self> {
        if bins == 0 || !(lo < hi) {
            return Err(invalid("histogram needs lo < hi and at least one bin"));
        }
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|k| lo + width * k as f64).collect();
        let mut counts = vec![0u64; bins];
        for &x in data {
            if x.is_nan() {
                return Err(invalid("cannot bin NaN"));
            }
            let k = ((x - lo) / width).floor();
            let k = if k < 0.0 { 0 } else { (k as usize).min(bins - 1) };
            counts[k] += 1;
        }
        Ok(Self { edges, counts, total: data.len() as u64 })
    }
}

/// Asymptotic Kolmogorov constant `c(alpha)` with `P(sqrt(n) D > c) = alpha`.
pub fn ks_critical_constant(alpha: f64) -> f64 {
    if alpha == 0.01 {
        1.628
    } else if alpha == 0.05 {
        1.358
    } else {
        (-(0.5 * alpha).ln() / 2.0).sqrt()
    }
}

/// One-sample Kolmogorov-Smirnov statistic `sup |F_n - F|`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = samples.to_vec();
    if sorted.iter().any(|x| x.is_nan()) {
        return Err(invalid("KS samples contain NaN"));
    }
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d = sorted.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d.max(above).max(below)
    });
    Ok(d)
}

/// One-sample KS test against `cdf` with threshold `c(alpha) / sqrt(n)`.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64, alpha: f64) -> Result<GoFReport> {
    check_alpha(alpha)?;
    let d = ks_statistic(samples, cdf)?;
    let n = samples.len();
    Ok(GoFReport::new(
        TestKind::Ks,
        d,
        ks_critical_constant(alpha) / (n as f64).sqrt(),
        alpha,
        n,
    ))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("significance level must lie in (0, 1), got {alpha}")))
    }
}

/// Merges adjacent bins until each group has pooled expected count of at
/// least [`MIN_EXPECTED`] per sample; returns the grouped counts.
fn merge_sparse(a: &[u64], b: &[u64], na: f64, nb: f64) -> Vec<(f64, f64)> {
    let share = na.min(nb) / (na + nb);
    let mut groups: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        acc.0 += x as f64;
        acc.1 += y as f64;
        if (acc.0 + acc.1) * share >= MIN_EXPECTED {
            groups.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        match groups.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => groups.push(acc),
        }
    }
    groups
}

/// Two-sample chi-square homogeneity test on histograms with equal edges.
pub fn chi_square_two_sample(a: &Histogram, b: &Histogram, alpha: f64) -> Result<GoFReport> {
    check_alpha(alpha)?;
    if a.edges != b.edges {
        return Err(invalid("histograms must share bin edges"));
    }
    if a.total == 0 || b.total == 0 {
        return Err(Error::EmptyInput);
    }
    let (na, nb) = (a.total as f64, b.total as f64);
    let groups = merge_sparse(&a.counts, &b.counts, na, nb);
    let (ka, kb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let stat: f64 = groups
        .iter()
        .map(|&(x, y)| (ka * x - kb * y).powi(2) / (x + y))
        .sum();
    let df = if a.total == b.total { groups.len() - 1 } else { groups.len() };
    let threshold = if df == 0 {
        f64::INFINITY
    } else {
        ChiSquared::new(df as f64)
            .map_err(|e| invalid(e.to_string()))?
            .inverse_cdf(1.0 - alpha)
    };
    Ok(GoFReport::new(TestKind::ChiSquare, stat, threshold, alpha, (a.total + b.total) as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use rand::Rng;

    #[test]
    fn critical_constants() {
        assert_eq!(ks_critical_constant(0.01), 1.628);
        assert_eq!(ks_critical_constant(0.05), 1.358);
        assert!((ks_critical_constant(0.1) - 1.2239).abs() < 1e-4);
    }

    #[test]
    fn ks_statistic_by_hand() {
        // uniform cdf, samples 0.1 0.5 0.6: max over i/n - F and F - (i-1)/n
        let d = ks_statistic(&[0.6, 0.1, 0.5], |x| x).unwrap();
        // i=1: 1/3 - 0.1, 0.1; i=2: 2/3 - 0.5, 0.5 - 1/3; i=3: 1 - 0.6, 0.6 - 2/3
        assert!((d - 0.4).abs() < 1e-15);
        assert!(matches!(ks_statistic(&[], |x| x), Err(Error::EmptyInput)));
    }

    #[test]
    fn ks_repeated_value_fails() {
        let r = ks_test(&vec![0.5; 2000], |x| x, 0.01).unwrap();
        assert!(!r.passed());
        assert!((r.statistic - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ks_uniform_calibration() {
        let mut rng = RngStream::new(2024);
        let xs: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>()).collect();
        assert!(ks_test(&xs, |x| x.clamp(0.0, 1.0), 0.01).unwrap().passed());
        let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
        assert!(!ks_test(&sq, |x| x.clamp(0.0, 1.0), 0.01).unwrap().passed());
    }

    #[test]
    fn histogram_counts() {
        let h = Histogram::uniform(0.0, 1.0, 4, &[0.0, 0.1, 0.25, 0.99, 1.0, -3.0]).unwrap();
        assert_eq!(h.counts, vec![3, 1, 0, 2]);
        assert_eq!(h.total, 6);
        assert_eq!(h.edges.len(), h.counts.len() + 1);
        assert!(Histogram::uniform(0.0, 1.0, 2, &[f64::NAN]).is_err());
    }

    #[test]
    fn chi_square_identical_and_shifted() {
        let mut rng = RngStream::new(1);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        let ys: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        let zs: Vec<f64> = ys.iter().map(|y| y.powf(1.2)).collect();
        let hx = Histogram::uniform(0.0, 1.0, 32, &xs).unwrap();
        let same = chi_square_two_sample(&hx, &hx, 0.01).unwrap();
        assert_eq!(same.statistic, 0.0);
        assert!(chi_square_two_sample(&hx, &Histogram::uniform(0.0, 1.0, 32, &ys).unwrap(), 0.01)
            .unwrap()
            .passed());
        assert!(!chi_square_two_sample(&hx, &Histogram::uniform(0.0, 1.0, 32, &zs).unwrap(), 0.01)
            .unwrap()
            .passed());
    }

    #[test]
    fn chi_square_merges_sparse_bins() {
        let a = Histogram { edges: vec![0.0, 1.0, 2.0, 3.0], counts: vec![1, 100, 2], total: 103 };
        let b = Histogram { edges: a.edges.clone(), counts: vec![2, 99, 2], total: 103 };
        let groups = merge_sparse(&a.counts, &b.counts, 103.0, 103.0);
        assert_eq!(groups, vec![(103.0, 103.0)]);
        let r = chi_square_two_sample(&a, &b, 0.01).unwrap();
        assert!(r.passed() && r.threshold.is_infinite());
    }
}
