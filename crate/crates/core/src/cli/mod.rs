//! Command-line front end. Exit codes: 0 success, 1 input or solver error,
//! 2 converged but an identity check failed.

pub mod args;
pub mod commands;
pub mod output;

use clap::error::ErrorKind;
use clap::Parser;
use std::ffi::OsString;

use crate::error::Error;
use args::{Cli, Command};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success,
    VerificationFailed,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

fn describe(e: &CliError) -> String {
    match e {
        CliError::Usage(msg) => format!("usage error: {msg}"),
        CliError::Run(Error::ExponentOutOfRange { q, .. }) if *q == 2.0 => format!(
            "error: {}\nq = 2 has no minimizer: the infimum mu^2 - lambda nu is not attained. \
             Use `rellich table --linear` for its value.",
            e_inner(e)
        ),
        CliError::Run(err) => format!("error: {err}"),
    }
}

fn e_inner(e: &CliError) -> String {
    match e {
        CliError::Usage(m) => m.clone(),
        CliError::Run(err) => err.to_string(),
    }
}

/// Caps the global thread pool when `THREADS` is set.
fn configure_threads() {
    if let Some(k) = std::env::var("THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&k| k > 0)
    {
        // Fails only if the pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Certify(a) => commands::certify(a),
        Command::Scan(a) => commands::scan(a),
        Command::Table(a) => commands::table(a),
        Command::Bubble(a) => commands::bubble(a),
        Command::Selfcheck => commands::selfcheck(),
    };
    match result {
        Ok(Exit::Success) => 0,
        Ok(Exit::VerificationFailed) => 2,
        Err(e) => {
            eprintln!("{}", describe(&e));
            1
        }
    }
}
