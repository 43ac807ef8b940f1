use std::path::Path;
use std::process::ExitCode;

use clap::{Args, ValueEnum};
use rcm_core::verify::{run_verification, GridConfig};

use crate::output::write_json_value;
use crate::{resolve_precision, usage_error, PrecisionArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `default`, or a JSON grid file.
    #[arg(long, default_value = "default")]
    grid: String,
    /// Seed of the random matrix-identity draws [default: 42].
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random draws [default: 100].
    #[arg(long)]
    draws: Option<u32>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
    #[arg(long, value_enum)]
    precision: Option<PrecisionArg>,
}

fn load(args: &VerifyArgs) -> Result<GridConfig, String> {
    let mut cfg = if args.grid == "default" {
        GridConfig::default()
    } else {
        GridConfig::from_file(Path::new(&args.grid)).map_err(|e| format!("{}: {e}", args.grid))?
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(draws) = args.draws {
        cfg.draws = draws;
    }
    // a grid file's precision stands unless overridden by flag or environment
    if args.precision.is_some() || std::env::var_os("RCM_PRECISION").is_some() {
        cfg.precision = resolve_precision(args.precision)?;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

pub fn run(args: &VerifyArgs) -> ExitCode {
    let cfg = match load(args) {
        Ok(cfg) => cfg,
        Err(e) => return usage_error(e),
    };
    let report = match run_verification(&cfg) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    if let Err(e) = write_json_value(&report) {
        eprintln!("error: writing output: {e}");
        return ExitCode::FAILURE;
    }
    let s = &report.summary;
    eprintln!(
        "verify: {} records, {} passed, {} failed, {} informational, {} skipped",
        s.records, s.passed, s.failed, s.informational, s.skipped
    );
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed families: {}", report.failed_families().join(", "));
        ExitCode::from(1)
    }
}
