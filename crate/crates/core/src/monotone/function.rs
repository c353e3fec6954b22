use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::measures::check_nu;

/// Closed-form shape of a candidate metric function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionKind {
    /// `(1 + t) / 2`, generating the Bures (minimal monotone) metric.
    Bures,
    /// `2t / (1 + t)`.
    Harmonic,
    /// `sqrt(t)`.
    Sqrt,
    /// `(t - 1) / ln t`, continued by 1 at `t = 1`.
    LogMean,
    /// `t`.
    Identity,
    /// `t^2`; neither self-adjoint nor operator monotone.
    Square,
    /// The one-parameter family obtained by matching the product measure with
    /// concentration `nu` to a monotone-metric volume element.
    Derived { nu: f64 },
}

/// Open interval on which a function is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const POSITIVE: Self = Self { lo: 0.0, hi: f64::INFINITY };
    pub const REAL: Self = Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }

    /// Whether `[lo, hi]` sits inside this open interval.
    pub fn contains_closed(&self, lo: f64, hi: f64) -> bool {
        self.contains(lo) && self.contains(hi)
    }
}

/// Properties a function is claimed to have. Profiling checks them; nothing
/// relies on them unverified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claims {
    pub self_adjoint: bool,
    pub normalized_at_one: bool,
    pub expected_operator_monotone: bool,
}

/// A named candidate metric function `f: (0, inf) -> R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarFunction {
    name: String,
    kind: FunctionKind,
    domain: Interval,
    claims: Claims,
}

impl ScalarFunction {
    fn standard(name: &str, kind: FunctionKind, domain: Interval, self_adjoint: bool) -> Self {
        Self {
            name: name.to_string(),
            kind,
            domain,
            claims: Claims {
                self_adjoint,
                normalized_at_one: true,
                expected_operator_monotone: true,
            },
        }
    }

    pub fn bures() -> Self {
        Self::standard("bures", FunctionKind::Bures, Interval::REAL, true)
    }

    pub fn harmonic() -> Self {
        Self::standard("harmonic", FunctionKind::Harmonic, Interval::POSITIVE, true)
    }

    pub fn sqrt() -> Self {
        Self::standard("sqrt", FunctionKind::Sqrt, Interval::POSITIVE, true)
    }

    pub fn log_mean() -> Self {
        Self::standard("log-mean", FunctionKind::LogMean, Interval::POSITIVE, true)
    }

    pub fn identity() -> Self {
        Self::standard("identity", FunctionKind::Identity, Interval::REAL, false)
    }

    /// `t^2`, a negative control for the profiling checks.
    pub fn square() -> Self {
        Self {
            name: "square".into(),
            kind: FunctionKind::Square,
            domain: Interval::REAL,
            claims: Claims {
                self_adjoint: false,
                normalized_at_one: true,
                expected_operator_monotone: false,
            },
        }
    }

    /// Member `nu` of the derived family, see [`derived_f`].
    pub fn derived(nu: f64) -> Result<Self> {
        check_nu(nu)?;
        Ok(Self {
            name: format!("derived:{nu}"),
            kind: FunctionKind::Derived { nu },
            domain: Interval::POSITIVE,
            claims: Claims {
                self_adjoint: true,
                // f(1) = 0, so no rescaling reaches f(1) = 1
                normalized_at_one: false,
                expected_operator_monotone: false,
            },
        })
    }

    /// Resolves a catalog name, `square`, or `derived:<nu>`.
    pub fn from_id(id: &str) -> Result<Self> {
        if let Some(nu) = id.strip_prefix("derived:") {
            let nu: f64 = nu
                .trim()
                .parse()
                .map_err(|_| Error::UnknownFunction(id.to_string()))?;
            return Self::derived(nu);
        }
        catalog()
            .into_iter()
            .chain(std::iter::once(Self::square()))
            .find(|f| f.name == id)
            .ok_or_else(|| Error::UnknownFunction(id.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn claims(&self) -> Claims {
        self.claims
    }

    /// Same name, domain and claims with a different closed form.
    pub fn with_kind(mut self, kind: FunctionKind) -> Self {
        self.kind = kind;
        self
    }

    /// Evaluates without a domain check.
    pub fn eval(&self, t: f64) -> f64 {
        match self.kind {
            FunctionKind::Bures => 0.5 * (1.0 + t),
            FunctionKind::Harmonic => 2.0 * t / (1.0 + t),
            FunctionKind::Sqrt => t.sqrt(),
            FunctionKind::LogMean => log_mean(t),
            FunctionKind::Identity => t,
            FunctionKind::Square => t * t,
            FunctionKind::Derived { nu } => derived_unchecked(nu, t),
        }
    }

    /// Evaluates, rejecting arguments outside the domain and non-finite results.
    pub fn try_eval(&self, t: f64) -> Result<f64> {
        if !self.domain.contains(t) {
            return Err(domain(format!(
                "{} is undefined at t = {t} (domain ({}, {}))",
                self.name, self.domain.lo, self.domain.hi
            )));
        }
        let v = self.eval(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(domain(format!("{} is not finite at t = {t}", self.name)))
        }
    }
}

/// The standard operator monotone functions.
pub fn catalog() -> Vec<ScalarFunction> {
    vec![
        ScalarFunction::bures(),
        ScalarFunction::harmonic(),
        ScalarFunction::sqrt(),
        ScalarFunction::log_mean(),
        ScalarFunction::identity(),
    ]
}

fn log_mean(t: f64) -> f64 {
    let u = t - 1.0;
    if u == 0.0 {
        1.0
    } else if u.abs() < 1e-6 {
        // u / ln(1 + u) = 1 + u/2 - u^2/12 + u^3/24 - ...
        1.0 + u * (0.5 + u * (-1.0 / 12.0 + u / 24.0))
    } else {
        u / u.ln_1p()
    }
}

fn derived_unchecked(nu: f64, t: f64) -> f64 {
    let s = 1.0 + t;
    let d = 1.0 - t;
    4f64.powf(-nu) * d * d * (t / (s * s)).powf(0.5 - nu) / s
}

/// `4^(-nu) (1 - t)^2 (t / (1 + t)^2)^(1/2 - nu) / (1 + t)` for `t > 0`.
///
/// The family is only determined up to a constant factor. `4^(-nu)` makes
/// `y f(x/y)` equal to `(x - y)^2 / (4 sqrt(xy))` at `nu = 1` and
/// `(x - y)^2 / (2 (x + y))` at `nu = 1/2`; equivalently
/// `f(t) = (1 - t)^2 / (2 (1 + t)) * (4t / (1 + t)^2)^(1/2 - nu)`.
pub fn derived_f(nu: f64, t: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain(format!("derived family needs t > 0, got {t}")));
    }
    let v = derived_unchecked(nu, t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("derived_f({nu}, {t}) overflows")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_values_at_one() {
        for f in catalog() {
            assert_eq!(f.try_eval(1.0).unwrap(), 1.0, "{}", f.name());
            assert!(f.claims().expected_operator_monotone);
            assert!(f.claims().normalized_at_one);
        }
        assert_eq!(ScalarFunction::log_mean().eval(1.0), 1.0);
    }

    #[test]
    fn harmonic_self_adjoint_identity() {
        let f = ScalarFunction::harmonic();
        for t in [0.01, 0.5, 2.0, 37.0] {
            assert!((f.eval(t) - t * f.eval(1.0 / t)).abs() < 1e-12);
        }
    }

    #[test]
    fn log_mean_series_matches_direct_evaluation() {
        let f = ScalarFunction::log_mean();
        for u in [1e-7, -3e-7, 9e-7, 2e-6, -5e-6] {
            let t: f64 = 1.0 + u;
            let direct = (t - 1.0) / t.ln();
            assert!((f.eval(t) - direct).abs() < 1e-9, "u = {u}");
        }
        // continuity across the switch to the series
        let lo = f.eval(1.0 + 0.999_999e-6);
        let hi = f.eval(1.0 + 1.000_001e-6);
        assert!((hi - lo).abs() < 1e-11);
        assert!((f.eval(std::f64::consts::E) - (std::f64::consts::E - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn derived_special_cases() {
        assert_eq!(derived_f(0.7, 1.0).unwrap(), 0.0);
        for t in [0.1f64, 0.5, 3.0] {
            let one = (1.0 - t).powi(2) / (4.0 * t.sqrt());
            assert!((derived_f(1.0, t).unwrap() - one).abs() < 1e-14);
            let half = (1.0 - t).powi(2) / (2.0 * (1.0 + t));
            assert!((derived_f(0.5, t).unwrap() - half).abs() < 1e-14);
        }
        assert!(derived_f(1.0, 0.0).is_err());
        assert!(derived_f(1.0, -2.0).is_err());
        assert!(derived_f(0.0, 1.0).is_err());
    }

    #[test]
    fn identifiers() {
        assert_eq!(ScalarFunction::from_id("sqrt").unwrap(), ScalarFunction::sqrt());
        assert_eq!(ScalarFunction::from_id("square").unwrap(), ScalarFunction::square());
        let d = ScalarFunction::from_id("derived:0.5").unwrap();
        assert_eq!(d.kind(), FunctionKind::Derived { nu: 0.5 });
        assert!(!d.claims().normalized_at_one);
        assert!(matches!(ScalarFunction::from_id("nosuch"), Err(Error::UnknownFunction(_))));
        assert!(matches!(ScalarFunction::from_id("derived:x"), Err(Error::UnknownFunction(_))));
        assert!(ScalarFunction::from_id("derived:-1").is_err());
    }

    #[test]
    fn domain_checks() {
        let f = ScalarFunction::sqrt();
        assert!(f.try_eval(0.0).is_err());
        assert!(ScalarFunction::bures().try_eval(-3.0).is_ok());
    }
}
