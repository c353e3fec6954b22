use std::io;
use std::process::ExitCode;

use qmeasure_cli::{run, Runtime};

fn main() -> ExitCode {
    let code = run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock(), &Runtime::from_env());
    ExitCode::from(code as u8)
}
