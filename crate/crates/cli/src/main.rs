//! `rcm`: moment tables, the verification suite and the series identities.

mod compute;
mod identities;
mod output;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rcm_core::verify::Precision;

/// Relativistic Coulomb expectation values for Dirac hydrogenlike states.
#[derive(Debug, Parser)]
#[command(name = "rcm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate <r^p>, <beta r^p> and <i alpha.n beta r^p> over a range of p.
    #[command(allow_negative_numbers = true)]
    Compute(compute::ComputeArgs),
    /// Run every cross-check over a parameter grid and print the report.
    #[command(allow_negative_numbers = true)]
    Verify(verify::VerifyArgs),
    /// Check the linear 3F2 identities over a grid of n, nu and p.
    #[command(allow_negative_numbers = true)]
    Identities(identities::IdentitiesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    Double,
    High,
}

/// Exit status for invalid arguments, shared with clap's usage errors.
pub const EXIT_USAGE: u8 = 2;

/// The `--precision` flag if given, else `RCM_PRECISION`, else double.
pub fn resolve_precision(flag: Option<PrecisionArg>) -> Result<Precision, String> {
    if let Some(p) = flag {
        return Ok(match p {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::High => Precision::High,
        });
    }
    match std::env::var("RCM_PRECISION") {
        Ok(v) => v.parse().map_err(|e| format!("RCM_PRECISION: {e}")),
        Err(std::env::VarError::NotPresent) => Ok(Precision::Double),
        Err(e) => Err(format!("RCM_PRECISION: {e}")),
    }
}

/// Prints `msg` as a usage error and returns the matching status.
pub fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Compute(args) => compute::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Identities(args) => identities::run(&args),
    }
}
