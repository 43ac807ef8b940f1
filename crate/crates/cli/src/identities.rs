use std::process::ExitCode;

use clap::Args;
use rcm_core::identities::{identity_grid, IdentityCheck, DEFAULT_NUS};
use rcm_core::verify::{Family, Precision};
use rcm_core::DoubleDouble;
use serde::Serialize;

use crate::output::{write_csv, write_json, Format};
use crate::{resolve_precision, usage_error, PrecisionArg};

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long, default_value_t = 8)]
    n_max: u32,
    #[arg(long, default_value_t = 8)]
    p_max: u32,
    /// Comma-separated positive values of nu.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_NUS)]
    nu: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_enum)]
    precision: Option<PrecisionArg>,
}

#[derive(Serialize)]
struct Record {
    identity: &'static str,
    n: u32,
    nu: f64,
    p: u32,
    lhs: f64,
    rhs: f64,
    residual: f64,
    verdict: &'static str,
}

const CSV_HEADER: [&str; 8] = ["identity", "n", "nu", "p", "lhs", "rhs", "residual", "verdict"];

#[derive(Serialize)]
struct Summary {
    precision: Precision,
    tolerance: f64,
    records: usize,
    passed: usize,
    failed: usize,
    max_residual: Option<f64>,
}

pub fn run(args: &IdentitiesArgs) -> ExitCode {
    let precision = match resolve_precision(args.precision) {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    if let Some(nu) = args.nu.iter().find(|nu| !(**nu > 0.0 && nu.is_finite())) {
        return usage_error(format!("nu must be positive, got {nu}"));
    }
    let grid = match precision {
        Precision::Double => identity_grid::<f64>(1, args.n_max, args.p_max, &args.nu),
        Precision::High => identity_grid::<DoubleDouble>(1, args.n_max, args.p_max, &args.nu),
    };
    let checks = match grid {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    let tolerance = Family::Identities.default_tolerance(precision).expect("identities are asserted");
    let records: Vec<Record> = checks.iter().map(|c| record(c, tolerance)).collect();
    let failed = records.iter().filter(|r| r.verdict == "fail").count();

    let written = match args.format {
        Format::Json => {
            let summary = Summary {
                precision,
                tolerance,
                records: records.len(),
                passed: records.len() - failed,
                failed,
                max_residual: records.iter().map(|r| r.residual).reduce(f64::max),
            };
            write_json(&records, &summary)
        }
        Format::Csv => write_csv(&records, &CSV_HEADER),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::FAILURE;
    }
    if failed > 0 {
        eprintln!("identities: {failed} of {} above tolerance {tolerance:e}", records.len());
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

fn record(c: &IdentityCheck, tolerance: f64) -> Record {
    Record {
        identity: c.name.as_str(),
        n: c.n,
        nu: c.nu,
        p: c.p,
        lhs: c.lhs,
        rhs: c.rhs,
        residual: c.residual,
        verdict: if c.residual <= tolerance { "pass" } else { "fail" },
    }
}
