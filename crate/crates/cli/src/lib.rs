//! Command-line front end for `fluid-aoi`: point evaluation, arrival-rate
//! sweeps, simulation, table reproduction and cross-engine validation, all
//! emitting CSV.
//!
//! Exit codes: 0 success, 1 validation failure, 2 invalid flags or
//! parameters, 3 stability violation or empty feasible region, 4 numerical
//! failure.

pub mod args;
mod commands;
pub mod format;

use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use fluid_aoi::Error;

use args::{Cli, Command};

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Model(Error),
    Io(String),
    ValidationFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::ValidationFailed => 1,
            Failure::Usage(_) | Failure::Io(_) => 2,
            Failure::Model(e) => match e {
                Error::StabilityViolation(_) | Error::EmptyFeasibleRegion { .. } => 3,
                Error::RootNotFound { .. } | Error::SingularSystem { .. } | Error::InsufficientData(_) => 4,
                Error::InvalidParams(_) | Error::Unsupported(_) | Error::InvalidConfig(_) => 2,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
            Failure::Model(e) => write!(f, "{e}"),
            Failure::ValidationFailed => f.write_str("validation failed"),
        }
    }
}

/// Run the command line `args` (including the program name) and return the
/// process exit code.
pub fn run(args: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let args = match args::expand_config(args) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    2
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => commands::eval(a, stdout),
        Command::Sweep(a) => commands::sweep(a, stdout),
        Command::Simulate(a) => commands::simulate(a, stdout),
        Command::Table1(a) => commands::table1(a, stdout),
        Command::Validate(a) => {
            commands::validate(a, stdout).and_then(|ok| if ok { Ok(()) } else { Err(Failure::ValidationFailed) })
        }
    };
    match result {
        Ok(()) => 0,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {failure}");
            failure.exit_code()
        }
    }
}
