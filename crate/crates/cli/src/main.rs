//! `riccati`: command-line driver for the homographic Riccati scheme.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;

use std::fmt;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_NUMERICAL: u8 = 2;
pub const EXIT_MAX_STEPS: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 66;
pub const EXIT_IO: u8 = 74;

/// An error message paired with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_USAGE, message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(EXIT_IO, message)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<riccati_core::Error> for Failure {
    fn from(e: riccati_core::Error) -> Self {
        use riccati_core::Error as E;
        let code = match &e {
            E::Diverged { .. }
            | E::LyapunovSingular { .. }
            | E::Singular { .. }
            | E::NoConvergence { .. } => EXIT_NUMERICAL,
            E::MaxStepsExceeded { .. } => EXIT_MAX_STEPS,
            E::Reference(_) => EXIT_DATA,
            E::InvalidInput(_) | E::Dimension(_) | E::Domain(_) => EXIT_USAGE,
        };
        Self::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = match cli.command {
        Command::Run(a) => a.resolve().and_then(commands::run),
        Command::Compare(a) => a.resolve().and_then(commands::compare),
        Command::ValidateFigure13(a) => commands::validate_figure13(&a),
        Command::ScalarOrder(a) => commands::scalar_order(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("riccati: {f}");
            ExitCode::from(f.code)
        }
    }
}
