//! `exmatch`: generation, certification and simulation front end.
//!
//! Every line reporting a guarantee starts with `PASS` or `FAIL` and carries
//! exact rationals. Output is a function of the inputs and seeds only.

mod args;
mod commands;
mod trace;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::Parser;

pub use args::normalize;
pub use trace::{parse_dict, parse_match, parse_route, DictOp, MatchOp, RouteOp};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] expander_match::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use expander_match::Error as E;
        match self {
            CliError::Core(E::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(
                E::Parse { .. }
                | E::InvalidParameter(_)
                | E::InvalidGraph(_)
                | E::InvalidNode { .. },
            ) => EXIT_USAGE,
            CliError::Io { .. } | CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(_) | CliError::Output(_) => EXIT_FAIL,
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let cli = match args::Cli::try_parse_from(normalize(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                eprint!("{e}");
            }
            return code;
        }
    };
    match commands::dispatch(&cli, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
