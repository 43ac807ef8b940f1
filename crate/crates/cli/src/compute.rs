use std::process::ExitCode;

use clap::{ArgGroup, Args, ValueEnum};
use rcm_core::closedform::moments;
use rcm_core::params::FINE_STRUCTURE;
use rcm_core::recurrence::{reflect, step_up};
use rcm_core::verify::Precision;
use rcm_core::{derive_params, DerivedParams, DoubleDouble, MomentError, MomentTriple, QuantumNumbers, Real, Representation};
use serde::Serialize;

use crate::output::{write_csv, write_json, Format};
use crate::{resolve_precision, usage_error, PrecisionArg};

/// Status when a requested power was skipped under `--strict`.
const EXIT_STRICT: u8 = 3;

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("coupling").required(true).args(["mu", "z"])))]
pub struct ComputeArgs {
    /// Dirac quantum number (nonzero integer).
    #[arg(long)]
    kappa: i32,
    /// Radial quantum number.
    #[arg(long)]
    n: u32,
    /// Coulomb coupling alpha Z.
    #[arg(long)]
    mu: Option<f64>,
    /// Nuclear charge; the coupling is alpha * z.
    #[arg(long)]
    z: Option<f64>,
    /// Fine-structure constant used with --z.
    #[arg(long, requires = "z", default_value_t = FINE_STRUCTURE)]
    alpha: f64,
    /// Inverse Compton length.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long)]
    p_min: i32,
    #[arg(long)]
    p_max: i32,
    #[arg(long, value_enum, default_value_t = ReprArg::Traditional)]
    repr: ReprArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_enum)]
    precision: Option<PrecisionArg>,
    /// Exit with status 3 if any requested power is skipped.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReprArg {
    Traditional,
    Nu,
    Both,
    /// Upward steps from (1, epsilon), reflected for p <= -3.
    Recurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    Closed(Representation),
    Recurrence,
}

impl Route {
    fn tag(self) -> &'static str {
        match self {
            Route::Closed(r) => r.tag(),
            Route::Recurrence => "recurrence",
        }
    }
}

impl ReprArg {
    fn routes(self) -> Vec<Route> {
        match self {
            ReprArg::Traditional => vec![Route::Closed(Representation::Traditional)],
            ReprArg::Nu => vec![Route::Closed(Representation::NikiforovUvarov)],
            ReprArg::Both => vec![
                Route::Closed(Representation::Traditional),
                Route::Closed(Representation::NikiforovUvarov),
            ],
            ReprArg::Recurrence => vec![Route::Recurrence],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct Record {
    n: u32,
    kappa: i32,
    mu: f64,
    beta: f64,
    nu: f64,
    epsilon: f64,
    a: f64,
    p: i32,
    repr: &'static str,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    big_a: Option<f64>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    big_b: Option<f64>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    big_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skip: Option<String>,
}

#[derive(Serialize)]
struct CsvRow {
    n: u32,
    kappa: i32,
    mu: f64,
    beta: f64,
    p: i32,
    repr: &'static str,
    a: f64,
    b: f64,
    c: f64,
}

const CSV_HEADER: [&str; 9] = ["n", "kappa", "mu", "beta", "p", "repr", "A", "B", "C"];

#[derive(Serialize)]
struct Summary {
    precision: Precision,
    representations: Vec<&'static str>,
    records: usize,
    skipped: usize,
}

type Outcome = Result<MomentTriple<f64>, String>;

fn skip_reason(p: i32, e: &MomentError) -> String {
    match e {
        MomentError::PrefactorVanishes => "p=-1 undetermined by the moment relations".to_string(),
        MomentError::Inadmissible { .. } => format!("p={p} inadmissible: needs 2nu+p+1 > 0"),
        other => format!("p={p}: {other}"),
    }
}

fn finite(t: MomentTriple<f64>) -> Outcome {
    if t.a.is_finite() && t.b.is_finite() && t.c.is_finite() {
        Ok(t)
    } else {
        Err(format!("p={}: non-finite result", t.p))
    }
}

/// Upward chain from the initial data `(1, epsilon)` up to `top`, stopping at the first failure.
fn upward_chain<T: Real>(dp: &DerivedParams<T>, top: i32) -> Vec<MomentTriple<T>> {
    let mut chain = vec![MomentTriple::from_pair(dp, 0, T::one(), dp.epsilon)];
    for p in 0..top {
        match step_up(dp, p, &chain[p as usize]) {
            Ok(t) => chain.push(t),
            Err(_) => break,
        }
    }
    chain
}

fn by_recurrence<T: Real>(dp: &DerivedParams<T>, chain: &[MomentTriple<T>], p: i32) -> Outcome {
    let from_chain = |q: i32| {
        chain
            .get(q as usize)
            .copied()
            .ok_or_else(|| format!("p={q}: upward recurrence broke down"))
    };
    match p {
        -1 => Err("p=-1 undetermined by the moment relations".to_string()),
        -2 => Err("p=-2 unreachable by recurrence: its reflection partner is p=-1".to_string()),
        p if p >= 0 => finite(from_chain(p)?.to_f64()),
        p => {
            let source = -p - 3;
            let t = reflect(dp, source, &from_chain(source)?).map_err(|e| format!("p={p}: {e}"))?;
            finite(t.to_f64())
        }
    }
}

fn table<T: Real>(qn: &QuantumNumbers, routes: &[Route], p_min: i32, p_max: i32) -> Vec<(i32, Route, Outcome)> {
    let dp: DerivedParams<T> = derive_params(qn).expect("validated state");
    let chain = if routes.contains(&Route::Recurrence) {
        upward_chain(&dp, p_max.max(-p_min - 3).max(0))
    } else {
        Vec::new()
    };
    let mut out = Vec::new();
    for p in p_min..=p_max {
        for &route in routes {
            let outcome = match route {
                Route::Closed(r) => moments(&dp, p, r)
                    .map_err(|e| skip_reason(p, &e))
                    .and_then(|t| finite(t.to_f64())),
                Route::Recurrence => by_recurrence(&dp, &chain, p),
            };
            out.push((p, route, outcome));
        }
    }
    out
}

pub fn run(args: &ComputeArgs) -> ExitCode {
    let precision = match resolve_precision(args.precision) {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    if args.p_min > args.p_max {
        return usage_error(format!("--p-min {} exceeds --p-max {}", args.p_min, args.p_max));
    }
    let qn = match (args.mu, args.z) {
        (Some(mu), _) => QuantumNumbers::with_beta(args.n, args.kappa, mu, args.beta),
        (None, Some(z)) => QuantumNumbers::from_charge(args.n, args.kappa, z, args.alpha, args.beta),
        (None, None) => unreachable!("clap requires --mu or --z"),
    };
    let qn = match qn {
        Ok(qn) => qn,
        Err(e) => return usage_error(e),
    };
    let state: DerivedParams<f64> = derive_params(&qn).expect("validated state");
    let routes = args.repr.routes();
    let rows = match precision {
        Precision::Double => table::<f64>(&qn, &routes, args.p_min, args.p_max),
        Precision::High => table::<DoubleDouble>(&qn, &routes, args.p_min, args.p_max),
    };

    let records: Vec<Record> = rows
        .iter()
        .map(|(p, route, outcome)| {
            let (t, skip) = match outcome {
                Ok(t) => (Some(t), None),
                Err(reason) => (None, Some(reason.clone())),
            };
            Record {
                n: qn.n,
                kappa: qn.kappa,
                mu: qn.mu,
                beta: qn.beta,
                nu: state.nu,
                epsilon: state.epsilon,
                a: state.a,
                p: *p,
                repr: route.tag(),
                big_a: t.map(|t| t.a),
                big_b: t.map(|t| t.b),
                big_c: t.map(|t| t.c),
                skip,
            }
        })
        .collect();
    let skipped = records.iter().filter(|r| r.skip.is_some()).count();

    let written = match args.format {
        Format::Json => {
            let summary = Summary {
                precision,
                representations: routes.iter().map(|r| r.tag()).collect(),
                records: records.len() - skipped,
                skipped,
            };
            write_json(&records, &summary)
        }
        Format::Csv => {
            for r in records.iter().filter(|r| r.skip.is_some()) {
                eprintln!("skip: repr={} {}", r.repr, r.skip.as_deref().unwrap_or_default());
            }
            let rows: Vec<CsvRow> = records
                .iter()
                .filter_map(|r| {
                    Some(CsvRow {
                        n: r.n,
                        kappa: r.kappa,
                        mu: r.mu,
                        beta: r.beta,
                        p: r.p,
                        repr: r.repr,
                        a: r.big_a?,
                        b: r.big_b?,
                        c: r.big_c?,
                    })
                })
                .collect();
            write_csv(&rows, &CSV_HEADER)
        }
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::FAILURE;
    }
    if args.strict && skipped > 0 {
        eprintln!("error: {skipped} requested power(s) skipped");
        return ExitCode::from(EXIT_STRICT);
    }
    ExitCode::SUCCESS
}
