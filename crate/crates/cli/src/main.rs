//! `steer`: command-line front end for seqsteer.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 solver failure.

mod args;
mod commands;
mod expand;
mod output;
mod strategy;

use std::fmt;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Solver(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Solver(m) => write!(f, "solver failure: {m}"),
        }
    }
}

impl From<seqsteer::Error> for CliError {
    fn from(e: seqsteer::Error) -> Self {
        if e.is_solver_failure() {
            CliError::Solver(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("STEER_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("STEER_THREADS={v} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run() -> Result<(), CliError> {
    configure_threads()?;
    let argv = expand::expand(std::env::args().collect())?;
    let cli = Cli::try_parse_from(&argv).unwrap_or_else(|e| e.exit());
    let start = Instant::now();
    let (report, output) = match &cli.command {
        Command::Radius(a) => (commands::radius(a)?, &a.output),
        Command::Sweep(a) => (commands::sweep_cmd(a)?, &a.output),
        Command::Chain(a) => (commands::chain(a)?, &a.output),
        Command::Region(a) => (commands::region(a)?, &a.output),
    };
    output::emit(&report.table, &report.meta, output, &argv, start.elapsed().as_secs_f64())?;
    match report.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("steer: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_exit_codes() {
        let stall: CliError = seqsteer::Error::SolverStall("gap".into()).into();
        assert_eq!(stall.exit_code(), 3);
        let bad: CliError = seqsteer::Error::InvalidParams("W".into()).into();
        assert_eq!(bad.exit_code(), 2);
        assert_eq!(CliError::Io("disk".into()).exit_code(), 2);
    }
}
