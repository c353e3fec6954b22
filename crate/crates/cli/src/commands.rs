use std::io::Write;
use std::path::Path;

use qmeasure::measures::{self, SampleRecord};
use qmeasure::monotone::{self, operator_monotonicity_test, Direction, OpMonoConfig};
use qmeasure::rng;
use qmeasure::verify::suite::{failures, run_suite, SuiteConfig};
use qmeasure::{BlochVector, OperatorMonotonicityReport, ScalarFunction};
use serde::Serialize;

use crate::args::{CheckFArgs, Cli, Command, Common, DensityArgs, Format, OpmonoArgs, VerifyArgs};
use crate::output;
use crate::{Failure, Runtime};

const DEFAULT_SEED: u64 = 42;
const JACOBIAN_TOL: f64 = 1e-12;

type Outcome = Result<(), Failure>;

pub(crate) fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write, rt: &Runtime) -> Outcome {
    let seed = resolve_seed(cli.common.seed, rt.seed_env.as_deref())?;
    let c = &cli.common;
    match &cli.command {
        Command::Sample => sample(c, seed, stdout, rt),
        Command::Density(a) => density(c, a, stdout, stderr),
        Command::CheckF(a) => check_f(c, a, stdout, rt),
        Command::Opmono(a) => opmono(c, a, seed, stdout, rt),
        Command::Verify(a) => verify(c, a, seed, stdout, rt),
    }
}

fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, Failure> {
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{} must be an unsigned integer, got `{v}`", crate::SEED_ENV))),
        None => Ok(flag.unwrap_or(DEFAULT_SEED)),
    }
}

fn emit(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn resolve_function(id: &str, rt: &Runtime) -> Result<ScalarFunction, Failure> {
    let f = ScalarFunction::from_id(id)?;
    Ok(match rt.function_override {
        Some(wrap) => wrap(f),
        None => f,
    })
}

fn sample(c: &Common, seed: u64, stdout: &mut dyn Write, rt: &Runtime) -> Outcome {
    let rhos = measures::sample_batch_with(rt.sampler, c.nu, c.n as usize, seed, rng::DEFAULT_WORKERS)?;
    let rows = rhos
        .iter()
        .map(|rho| SampleRecord::from_density(rho).map(|r| r.values()))
        .collect::<qmeasure::Result<Vec<_>>>()?;
    let text = match c.format {
        Format::Csv => output::csv(SampleRecord::HEADER, rows),
        Format::Json => output::json_records(SampleRecord::HEADER, rows),
    };
    emit(&text, c.output.as_deref(), stdout)
}

fn density(c: &Common, a: &DensityArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let nu = c.nu;
    let mut jacobian = 0.0f64;
    let mut track = |b: &BlochVector| -> Result<(), Failure> {
        if a.check_jacobian {
            let (r, theta) = (b.r(), b.theta());
            let spherical = measures::zhsl_density_spherical(nu, r, theta)?;
            let cartesian = measures::zhsl_density_cartesian(nu, b)?;
            let res = (spherical - cartesian * r * r * theta.sin()).abs() / spherical.abs().max(1.0);
            jacobian = jacobian.max(res);
        }
        Ok(())
    };

    let text = if let Some([x, y, z]) = a.point {
        let b = BlochVector::new(x, y, z)?;
        let q = measures::zhsl_density_cartesian(nu, &b)?;
        track(&b)?;
        let header = ["x", "y", "z", "density"];
        match c.format {
            Format::Csv => output::csv(header, [[x, y, z, q]]),
            Format::Json => output::json_records(header, [[x, y, z, q]]),
        }
    } else {
        let (r_lo, r_hi) = a.r_range;
        if !(r_lo > 0.0 && r_hi < 1.0) {
            return Err(Failure::Usage(format!(
                "radius grid must avoid r = 0 and r = 1, got {r_lo},{r_hi}"
            )));
        }
        let (t_lo, t_hi) = a.theta_range;
        if !(t_lo >= 0.0 && t_hi <= std::f64::consts::PI) {
            return Err(Failure::Usage(format!("theta grid must lie in [0, pi], got {t_lo},{t_hi}")));
        }
        let mut rows = Vec::new();
        for r in monotone::linear_grid(r_lo, r_hi, a.r_steps as usize) {
            for theta in monotone::linear_grid(t_lo, t_hi, a.theta_steps as usize) {
                rows.push([r, theta, measures::zhsl_density_spherical(nu, r, theta)?]);
                for phi in [0.0, 1.3, 2.6, 3.9, 5.2] {
                    track(&BlochVector::from_spherical(r, theta, phi)?)?;
                }
            }
        }
        let header = ["r", "theta", "density"];
        match c.format {
            Format::Csv => output::csv(header, rows),
            Format::Json => output::json_records(header, rows),
        }
    };
    emit(&text, c.output.as_deref(), stdout)?;
    if a.check_jacobian {
        writeln!(stderr, "jacobian max residual: {jacobian:.3e}")?;
        if !(jacobian < JACOBIAN_TOL) {
            return Err(Failure::Verification(format!(
                "jacobian residual {jacobian:.3e} exceeds {JACOBIAN_TOL:e}"
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct FunctionProfile<'a> {
    function: &'a str,
    self_adjoint: &'static str,
    self_adjoint_residual: f64,
    profile_01: Direction,
    profile_gt1: Direction,
    f_at_1: f64,
    claims: qmeasure::monotone::Claims,
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn check_f(c: &Common, a: &CheckFArgs, stdout: &mut dyn Write, rt: &Runtime) -> Outcome {
    let f = resolve_function(&a.function, rt)?;
    if !(a.t_max > 1.001) {
        return Err(Failure::Usage(format!("--t-max must exceed 1.001, got {}", a.t_max)));
    }
    let n = a.grid_points as usize;
    let sa = monotone::check_self_adjoint(&f, &monotone::log_grid(1e-3, 1e3, 1001))?;
    let low = monotone::monotonicity_profile(&f, 0.001, 0.999, n)?;
    let high = monotone::monotonicity_profile(&f, 1.001, a.t_max, n)?;
    let f_at_1 = f
        .try_eval(1.0)
        .unwrap_or_else(|_| 0.5 * (f.eval(1.0 - 1e-10) + f.eval(1.0 + 1e-10)));
    let profile = FunctionProfile {
        function: f.name(),
        self_adjoint: verdict(sa.passed),
        self_adjoint_residual: sa.max_residual,
        profile_01: low.direction,
        profile_gt1: high.direction,
        f_at_1,
        claims: f.claims(),
    };
    emit(&output::json(&profile), c.output.as_deref(), stdout)?;
    if f.claims().self_adjoint && !sa.passed {
        return Err(Failure::Contradiction(format!(
            "{} is claimed self-adjoint but has residual {:.3e} at t = {}",
            f.name(),
            sa.max_residual,
            sa.worst_t
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct OpmonoOutput<'a> {
    #[serde(flatten)]
    report: &'a OperatorMonotonicityReport,
    expected_operator_monotone: bool,
    outcome: &'static str,
}

fn opmono(c: &Common, a: &OpmonoArgs, seed: u64, stdout: &mut dyn Write, rt: &Runtime) -> Outcome {
    let f = resolve_function(&a.function, rt)?;
    let cfg = OpMonoConfig::new(c.dim as usize, c.n as usize, a.range, seed);
    let report = operator_monotonicity_test(&f, &cfg)?;
    let expected = f.claims().expected_operator_monotone;
    // A search that finds nothing says nothing about a non-monotone function,
    // so only a violation for a claimed-monotone one is a contradiction.
    let contradiction = expected && !report.looks_monotone();
    let out = OpmonoOutput {
        report: &report,
        expected_operator_monotone: expected,
        outcome: if contradiction { "contradiction" } else { "consistent" },
    };
    emit(&output::json(&out), c.output.as_deref(), stdout)?;
    if contradiction {
        return Err(Failure::Contradiction(format!(
            "{} is expected operator monotone but {} of {} trials violated the order",
            f.name(),
            report.violations,
            report.trials
        )));
    }
    Ok(())
}

fn verify(c: &Common, a: &VerifyArgs, seed: u64, stdout: &mut dyn Write, rt: &Runtime) -> Outcome {
    let cfg = SuiteConfig { seed, nu: c.nu, n: c.n as usize, alpha: c.alpha, sampler: rt.sampler };
    let manifest = run_suite(&cfg)?;
    let text = output::json(&manifest);
    if let Some(p) = &a.report {
        emit(&text, Some(p), stdout)?;
    }
    emit(&text, c.output.as_deref(), stdout)?;
    let failed = failures(&manifest);
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.join(", ")))
    }
}
