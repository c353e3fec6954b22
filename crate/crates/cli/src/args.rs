use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qmeasure", version, about = "Random qubit states, monotone metrics and their checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags shared by all commands.
#[derive(Debug, Args)]
pub struct Common {
    /// Dirichlet concentration of the eigenvalue distribution (nu > 0).
    #[arg(long, global = true, default_value_t = 1.0, value_parser = positive)]
    pub nu: f64,
    /// Number of samples, or of trials for `opmono`.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Base seed; QMEASURE_SEED takes precedence when set.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Matrix order for `opmono` (1, 2 or 3).
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=3))]
    pub dim: u64,
    /// Significance level of the statistical tests, in (0, 1).
    #[arg(long, global = true, default_value_t = 0.01, value_parser = significance)]
    pub alpha: f64,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw states from the product measure: rows of x, y, z, d1, alpha, beta.
    Sample,
    /// Evaluate the Bloch-ball density on a spherical grid or at one point.
    Density(DensityArgs),
    /// Profile a candidate metric function (JSON).
    CheckF(CheckFArgs),
    /// Randomized operator-monotonicity test (JSON report).
    Opmono(OpmonoArgs),
    /// Run the full verification suite and emit its manifest (JSON).
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Cartesian point x,y,z; emits x, y, z, density.
    #[arg(long, value_parser = triple)]
    pub point: Option<[f64; 3]>,
    /// Radius range of the spherical grid.
    #[arg(long, value_parser = pair, default_value = "0.05,0.95")]
    pub r_range: (f64, f64),
    #[arg(long, default_value_t = 19, value_parser = clap::value_parser!(u64).range(1..))]
    pub r_steps: u64,
    /// Polar-angle range of the spherical grid.
    #[arg(long, value_parser = pair, default_value = "0.1,3.0")]
    pub theta_range: (f64, f64),
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    pub theta_steps: u64,
    /// Compare the spherical density with the Cartesian one times r^2 sin(theta)
    /// over the grid and print the largest residual.
    #[arg(long)]
    pub check_jacobian: bool,
}

#[derive(Debug, Args)]
pub struct CheckFArgs {
    /// Function identifier: bures, harmonic, sqrt, log-mean, identity, square
    /// or derived:<nu>.
    pub function: String,
    /// Upper end of the profile above 1.
    #[arg(long, default_value_t = 50.0)]
    pub t_max: f64,
    /// Grid points per monotonicity profile.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(2..))]
    pub grid_points: u64,
}

#[derive(Debug, Args)]
pub struct OpmonoArgs {
    /// Function identifier, as for `check-f`.
    pub function: String,
    /// Spectral window lo,hi for the random pairs.
    #[arg(long, value_parser = pair, default_value = "0,10")]
    pub range: (f64, f64),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Also write the manifest to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must satisfy nu > 0, got {v}"))
    }
}

fn significance(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("must satisfy 0 < alpha < 1, got {v}"))
    }
}

fn pair(s: &str) -> Result<(f64, f64), String> {
    match s.split(',').map(number).collect::<Result<Vec<_>, _>>()?.as_slice() {
        [lo, hi] if lo < hi => Ok((*lo, *hi)),
        [lo, hi] => Err(format!("need lo < hi, got {lo},{hi}")),
        _ => Err(format!("expected lo,hi, got `{s}`")),
    }
}

fn triple(s: &str) -> Result<[f64; 3], String> {
    s.split(',')
        .map(number)
        .collect::<Result<Vec<_>, _>>()?
        .try_into()
        .map_err(|_| format!("expected x,y,z, got `{s}`"))
}
