//! Command-line front end for `qmeasure`.
//!
//! The binary is a thin wrapper around [`run`], which takes its arguments,
//! output streams and [`Runtime`] explicitly so tests can drive every command
//! in-process and substitute faulty components.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::Parser;
use qmeasure::measures::{self, ZhslSampler};
use qmeasure::ScalarFunction;

pub use args::{Cli, Command, Format};

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "QMEASURE_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONTRADICTION: i32 = 3;

/// Process-level inputs that do not come from flags.
#[derive(Clone)]
pub struct Runtime {
    /// Value of [`SEED_ENV`], if set.
    pub seed_env: Option<String>,
    /// Single-draw sampler used by `sample` and the radial checks of `verify`.
    pub sampler: ZhslSampler,
    /// Applied to every function resolved from an identifier.
    pub function_override: Option<fn(ScalarFunction) -> ScalarFunction>,
}

impl Default for Runtime {
    fn default() -> Self {
        Self { seed_env: None, sampler: measures::sample_zhsl, function_override: None }
    }
}

impl Runtime {
    pub fn from_env() -> Self {
        Self { seed_env: std::env::var(SEED_ENV).ok(), ..Self::default() }
    }
}

/// Command failure, carrying its exit code.
#[derive(Debug)]
pub(crate) enum Failure {
    Usage(String),
    Verification(String),
    Io(String),
    Contradiction(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Verification(_) | Self::Io(_) => EXIT_FAILURE,
            Self::Contradiction(_) => EXIT_CONTRADICTION,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "error: {m}"),
            Self::Verification(m) => write!(f, "verification failed: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
            Self::Contradiction(m) => write!(f, "expectation contradicted: {m}"),
        }
    }
}

impl From<qmeasure::Error> for Failure {
    fn from(e: qmeasure::Error) -> Self {
        use qmeasure::Error::*;
        match e {
            Domain(_) | InvalidParameter(_) | UnknownFunction(_) | DegenerateInput(_) => Self::Usage(e.to_string()),
            _ => Self::Verification(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, rt: &Runtime) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return e.exit_code();
        }
    };
    match commands::dispatch(&cli, stdout, stderr, rt) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(stderr, "{failure}");
            failure.code()
        }
    }
}
