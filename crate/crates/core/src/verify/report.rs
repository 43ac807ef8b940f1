use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use super::config::{GridConfig, Precision};
use super::family::{Family, FamilyInfo};

pub const SCHEMA_VERSION: &str = "1";

/// Name of the pseudo-random generator behind the random draws.
pub const GENERATOR: &str = "ChaCha8Rng";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateKey {
    pub n: u32,
    pub kappa: i32,
    pub mu: f64,
}

impl StateKey {
    fn cmp_key(&self, o: &Self) -> Ordering {
        (self.kappa, self.n).cmp(&(o.kappa, o.n)).then(self.mu.total_cmp(&o.mu))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub family: &'static str,
    pub state: Option<StateKey>,
    pub p: Option<i32>,
    pub detail: String,
    pub residual: f64,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
}

impl CheckRecord {
    pub fn new(family: Family, tolerance: Option<f64>, state: Option<StateKey>, p: Option<i32>, detail: String, residual: f64) -> Self {
        let verdict = match tolerance {
            None => Verdict::Info,
            // NaN compares false, so it fails
            Some(t) if residual <= t => Verdict::Pass,
            Some(_) => Verdict::Fail,
        };
        Self {
            family: family.name(),
            state,
            p,
            detail,
            residual,
            tolerance,
            verdict,
        }
    }
}

/// A check that could not be evaluated, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkipRecord {
    pub family: &'static str,
    pub state: Option<StateKey>,
    pub p: Option<i32>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySummary {
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// `None` when the family has no records.
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub pass: bool,
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub informational: usize,
    pub skipped: usize,
    pub families: BTreeMap<&'static str, FamilySummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub precision: Precision,
    pub tolerances: BTreeMap<&'static str, Option<f64>>,
    pub generator: &'static str,
    pub seed: u64,
    pub draws: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema_version: &'static str,
    pub families: Vec<FamilyInfo>,
    pub environment: Environment,
    pub records: Vec<CheckRecord>,
    pub skipped: Vec<SkipRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    /// Sorts the records canonically and aggregates the summary.
    pub fn assemble(cfg: &GridConfig, mut records: Vec<CheckRecord>, mut skipped: Vec<SkipRecord>) -> Self {
        records.sort_by(|x, y| canonical(x.family, &x.state, x.p, &x.detail, y.family, &y.state, y.p, &y.detail));
        skipped.sort_by(|x, y| canonical(x.family, &x.state, x.p, &x.reason, y.family, &y.state, y.p, &y.reason));
        let summary = summarize(&records, &skipped);
        Self {
            schema_version: SCHEMA_VERSION,
            families: Family::ALL.iter().map(|f| f.info(cfg.tolerance(*f))).collect(),
            environment: Environment {
                precision: cfg.precision,
                tolerances: Family::ALL.iter().map(|f| (f.name(), cfg.tolerance(*f))).collect(),
                generator: GENERATOR,
                seed: cfg.seed,
                draws: cfg.draws,
            },
            records,
            skipped,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.pass
    }

    pub fn family_records<'a>(&'a self, family: Family) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.records.iter().filter(move |r| r.family == family.name())
    }

    pub fn failed_families(&self) -> Vec<&'static str> {
        self.summary
            .families
            .iter()
            .filter(|(_, s)| s.failed > 0)
            .map(|(name, _)| *name)
            .collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn canonical(
    fx: &str,
    sx: &Option<StateKey>,
    px: Option<i32>,
    dx: &str,
    fy: &str,
    sy: &Option<StateKey>,
    py: Option<i32>,
    dy: &str,
) -> Ordering {
    let state = match (sx, sy) {
        (Some(a), Some(b)) => a.cmp_key(b),
        (a, b) => a.is_some().cmp(&b.is_some()),
    };
    fx.cmp(fy).then(state).then(px.cmp(&py)).then(dx.cmp(dy))
}

fn summarize(records: &[CheckRecord], skipped: &[SkipRecord]) -> Summary {
    let mut families: BTreeMap<&'static str, FamilySummary> = Family::ALL
        .iter()
        .map(|f| {
            let empty = FamilySummary {
                records: 0,
                passed: 0,
                failed: 0,
                skipped: 0,
                max_residual: None,
            };
            (f.name(), empty)
        })
        .collect();
    let (mut passed, mut failed, mut info) = (0, 0, 0);
    for r in records {
        let s = families.get_mut(r.family).expect("known family");
        s.records += 1;
        match r.verdict {
            Verdict::Pass => {
                s.passed += 1;
                passed += 1;
            }
            Verdict::Fail => {
                s.failed += 1;
                failed += 1;
            }
            Verdict::Info => info += 1,
        }
        s.max_residual = Some(match s.max_residual {
            // a NaN residual must dominate the maximum
            Some(m) if !(r.residual <= m) => r.residual,
            Some(m) => m,
            None => r.residual,
        });
    }
    for k in skipped {
        // state-level skips belong to no family
        if let Some(s) = families.get_mut(k.family) {
            s.skipped += 1;
        }
    }
    Summary {
        pass: failed == 0,
        records: records.len(),
        passed,
        failed,
        informational: info,
        skipped: skipped.len(),
        families,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let rec = |res, tol| CheckRecord::new(Family::DetS, tol, None, None, String::new(), res);
        assert_eq!(rec(1e-13, Some(1e-12)).verdict, Verdict::Pass);
        assert_eq!(rec(1e-12, Some(1e-12)).verdict, Verdict::Pass);
        assert_eq!(rec(2e-12, Some(1e-12)).verdict, Verdict::Fail);
        assert_eq!(rec(f64::NAN, Some(1e-12)).verdict, Verdict::Fail);
        assert_eq!(rec(5.0, None).verdict, Verdict::Info);
    }

    #[test]
    fn summary_max_and_counts() {
        let cfg = GridConfig::default();
        let records = vec![
            CheckRecord::new(Family::DetS, Some(1e-12), None, Some(2), "x".into(), 3e-13),
            CheckRecord::new(Family::DetS, Some(1e-12), None, Some(1), "x".into(), 5e-12),
            CheckRecord::new(Family::DetT, Some(1e-12), None, Some(1), "x".into(), f64::NAN),
        ];
        let report = VerificationReport::assemble(&cfg, records, Vec::new());
        let det_s = &report.summary.families["det_s"];
        assert_eq!((det_s.records, det_s.passed, det_s.failed), (2, 1, 1));
        assert_eq!(det_s.max_residual, Some(5e-12));
        assert!(report.summary.families["det_t"].max_residual.unwrap().is_nan());
        assert!(!report.passed());
        assert_eq!(report.failed_families(), vec!["det_s", "det_t"]);
        // canonical order puts p = 1 before p = 2
        assert_eq!(report.records[0].p, Some(1));
    }
}
