//! `masking` — verify maskers, search for them, and replay the commitment
//! and multiparty demonstrations from the command line.
//!
//! Exit status: 0 on success or a positive verdict, 2 when the verdict is
//! negative (or a requested cheat is impossible), 1 on usage or input errors.

mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};

/// Outcome of a successful run, mapped onto the exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = match &cli.command {
        Command::Mask(a) => commands::mask(a),
        Command::Witness(a) => commands::witness(a),
        Command::Commit(a) => commands::commit(a),
        Command::Probe(a) => commands::probe(a),
    };
    match outcome {
        Ok(Verdict::Positive) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
