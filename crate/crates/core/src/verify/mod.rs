//! Cross-check harness over a grid of bound states.
//!
//! Every relation the crate implements is evaluated against an independent
//! route to the same quantity and recorded with its residual and verdict.
//! Checks that cannot be evaluated (inadmissible powers, vanishing
//! denominators) become skip records with the reason instead of failures.

pub mod config;
mod draws;
pub mod family;
pub mod report;

use std::collections::BTreeMap;
use std::fmt::Display;

pub use config::{ConfigError, Fault, GridConfig, IdentityGrid, PRange, Precision, MAX_ABS_P};
pub use draws::{random_draws_appendix_b, Draw};
pub use family::{Family, FamilyInfo};
pub use report::{CheckRecord, SkipRecord, StateKey, Verdict, VerificationReport, GENERATOR, SCHEMA_VERSION};

use crate::closedform::{
    b_minus_one, linear_relation_residual, moments, residual_prefactor_vanishing, MomentTriple, Representation,
};
use crate::ddouble::DoubleDouble;
use crate::dualhahn::{
    dual_hahn_residual, hahn_pair_direct, hahn_pair_from_moments, hahn_step, matrix_identity_residual,
    transform_t, transformed_transfer, transformed_transfer_from, DualHahnParams, HahnPair,
};
use crate::identities::{identity_grid, IdentityCheck, IdentityName};
use crate::params::{derive_params, DerivedParams, QuantumNumbers};
use crate::real::{rel_diff, Real};
use crate::recurrence::{
    family_matrices_from, s_matrix, step_down, step_down_b, step_up, three_term_a, three_term_a_coefficients,
    three_term_a_generic_from, three_term_b, three_term_b_coefficients, three_term_b_generic_from, RecurrenceError,
    TransferMatrix, VectorFamily,
};

/// Runs every check family over the grid in `cfg`.
///
/// Only an invalid configuration is an error; failing checks are recorded.
pub fn run_verification(cfg: &GridConfig) -> Result<VerificationReport, ConfigError> {
    cfg.validate()?;
    match cfg.precision {
        Precision::Double => run::<f64>(cfg),
        Precision::High => run::<DoubleDouble>(cfg),
    }
}

fn run<T: Real>(cfg: &GridConfig) -> Result<VerificationReport, ConfigError> {
    let mut sink = Sink::new(cfg);
    if !cfg.p_range.is_empty() {
        for &kappa in &cfg.kappa_values {
            for &n in &cfg.n_values {
                for &frac in &cfg.mu_fractions {
                    let mu = frac * f64::from(kappa.unsigned_abs());
                    let key = StateKey { n, kappa, mu };
                    match QuantumNumbers::with_beta(n, kappa, mu, cfg.beta).and_then(|qn| derive_params::<T>(&qn)) {
                        Ok(dp) => check_state(&mut sink, key, dp),
                        Err(e) => sink.skip_state(key, e),
                    }
                }
            }
        }
        sink.records.extend(draws::draw_records::<T>(cfg)?);
        check_identities::<T>(&mut sink);
    }
    Ok(VerificationReport::assemble(cfg, sink.records, sink.skipped))
}

struct Sink<'a> {
    cfg: &'a GridConfig,
    records: Vec<CheckRecord>,
    skipped: Vec<SkipRecord>,
}

impl<'a> Sink<'a> {
    fn new(cfg: &'a GridConfig) -> Self {
        Self {
            cfg,
            records: Vec::new(),
            skipped: Vec::new(),
        }
    }

    fn push(&mut self, family: Family, state: Option<StateKey>, p: Option<i32>, detail: impl Into<String>, residual: f64) {
        let tol = self.cfg.tolerance(family);
        self.records.push(CheckRecord::new(family, tol, state, p, detail.into(), residual));
    }

    fn skip(&mut self, family: Family, state: Option<StateKey>, p: Option<i32>, reason: impl Display) {
        self.skipped.push(SkipRecord {
            family: family.name(),
            state,
            p,
            reason: reason.to_string(),
        });
    }

    fn skip_state(&mut self, state: StateKey, reason: impl Display) {
        self.skipped.push(SkipRecord {
            family: "state",
            state: Some(state),
            p: None,
            reason: reason.to_string(),
        });
    }

    fn check<E: Display>(&mut self, family: Family, state: StateKey, p: i32, detail: impl Into<String>, r: Result<f64, E>) {
        match r {
            Ok(res) => self.push(family, Some(state), Some(p), detail, res),
            Err(e) => self.skip(family, Some(state), Some(p), e),
        }
    }

    /// `S_p`, with the configured fault applied.
    fn s_at<U: Real>(&self, dp: &DerivedParams<U>, p: i32) -> Result<TransferMatrix<U>, RecurrenceError> {
        let s = s_matrix(dp, p)?;
        Ok(match self.cfg.fault {
            Some(f) if f.p.is_none_or(|q| q == p) => {
                let mut e = s.entries();
                e[f.entry] += s.max_abs() * f.delta;
                TransferMatrix::with_det(e[0], e[1], e[2], e[3], s.det())
            }
            _ => s,
        })
    }
}

/// Largest gap between two moment triples relative to `A_p`.
///
/// `|B_p|` and `|C_p|` never exceed `A_p`, and both change sign with `p` for
/// excited states, so each is measured against `A_p` rather than itself.
fn triple_diff<T: Real>(x: &MomentTriple<T>, y: &MomentTriple<T>) -> f64 {
    let gap = (x.c - y.c).abs().to_f64();
    moment_diff((x.a, x.b), (y.a, y.b)).max(gap / x.a.abs().max(y.a.abs()).to_f64())
}

/// The two-term steps carry `(A, B)`; their `C` comes from the linear
/// relation, which has its own family and cancels badly when `A ~ B`.
fn step_diff<T: Real>(x: &MomentTriple<T>, y: &MomentTriple<T>) -> f64 {
    moment_diff((x.a, x.b), (y.a, y.b))
}

/// Gap between two `(A, B)` pairs relative to `A`.
fn moment_diff<T: Real>(x: (T, T), y: (T, T)) -> f64 {
    let scale = x.0.abs().max(y.0.abs());
    ((x.0 - y.0).abs().max((x.1 - y.1).abs()) / scale).to_f64()
}

fn pair_diff<T: Real>(x: (T, T), y: (T, T)) -> f64 {
    rel_diff(x.0, y.0).max(rel_diff(x.1, y.1))
}

struct State<T> {
    key: StateKey,
    dp: DerivedParams<T>,
    range: PRange,
    closed: BTreeMap<i32, MomentTriple<T>>,
}

impl<T: Real> State<T> {
    fn contains(&self, p: i32) -> bool {
        p >= self.range.min && p <= self.range.max
    }

    fn closed(&self, p: i32) -> Option<&MomentTriple<T>> {
        self.closed.get(&p)
    }

    fn ab(&self, p: i32) -> Option<(T, T)> {
        self.closed(p).map(|t| (t.a, t.b))
    }
}

fn check_state<T: Real>(sink: &mut Sink, key: StateKey, dp: DerivedParams<T>) {
    sink.push(Family::SpectralIdentity, Some(key), None, "", dp.spectral_residual());
    let mut st = State {
        key,
        dp,
        range: sink.cfg.p_range,
        closed: BTreeMap::new(),
    };
    closed_forms(sink, &mut st);
    moment_relations(sink, &st);
    two_term_steps(sink, &st);
    transfer_checks(sink, &st);
    three_term_checks(sink, &st);
    reflection(sink, &st);
    if dp.n == 0 {
        for f in [
            Family::TransformInitial,
            Family::DetT,
            Family::TransformedSimilarity,
            Family::HahnAgreement,
            Family::DualHahnDifference,
            Family::AppendixBPhysical,
        ] {
            sink.skip(f, Some(key), None, "T_p is singular for n = 0 (mu = -a kappa)");
        }
    } else {
        transform_checks(sink, &st);
        hahn_checks(sink, &st);
    }
}

/// Both closed forms at every power, with normalization, agreement, linear relation and positivity.
fn closed_forms<T: Real>(sink: &mut Sink, st: &mut State<T>) {
    let (key, dp) = (st.key, &st.dp);
    for p in st.range.iter() {
        let trad = moments(dp, p, Representation::Traditional);
        let nu = moments(dp, p, Representation::NikiforovUvarov);
        let (trad, nu) = match (trad, nu) {
            (Ok(t), Ok(n)) => (t, n),
            (Err(e), _) | (_, Err(e)) => {
                sink.skip(Family::RepresentationAgreement, Some(key), Some(p), e);
                continue;
            }
        };
        sink.push(Family::RepresentationAgreement, Some(key), Some(p), "", triple_diff(&trad, &nu));
        for (t, repr) in [(&trad, Representation::Traditional), (&nu, Representation::NikiforovUvarov)] {
            sink.push(Family::LinearRelation, Some(key), Some(p), repr.tag(), linear_relation_residual(dp, t));
            if p == 0 {
                let res = (t.a - 1.0).abs().to_f64().max(rel_diff(t.b, dp.epsilon));
                sink.push(Family::Normalization, Some(key), Some(0), repr.tag(), res);
            }
        }
        let positive = if trad.a > T::zero() { 0.0 } else { 1.0 };
        sink.push(Family::Positivity, Some(key), Some(p), "", positive);
        st.closed.insert(p, trad);
    }
}

/// Relations at `p = -1`, where only `B_{-1}` is determined.
fn moment_relations<T: Real>(sink: &mut Sink, st: &State<T>) {
    if !st.contains(-1) {
        return;
    }
    let (key, dp) = (st.key, &st.dp);
    sink.check(Family::PrefactorVanishing, key, -1, "", residual_prefactor_vanishing(dp).map(|r| r.max()));
    let expected = b_minus_one(dp);
    let r = sink.s_at(dp, 0).and_then(|s0| {
        let down = step_down_b(dp, 0, T::one(), dp.epsilon)?;
        let rows = [s0.b.recip(), dp.epsilon / s0.d, down];
        Ok(rows.iter().fold(0.0, |m, x| m.max(rel_diff(*x, expected))))
    });
    sink.check(Family::BMinusOne, key, -1, "", r);
}

fn two_term_steps<T: Real>(sink: &mut Sink, st: &State<T>) {
    let (key, dp) = (st.key, &st.dp);
    let wide = dp.widen();
    for p in st.range.iter() {
        let Some(t) = st.closed(p) else { continue };
        if let Some(next) = st.closed(p + 1) {
            sink.check(Family::StepUp, key, p, "", step_up(dp, p, t).map(|u| step_diff(&u, next)));
            let native = step_up(dp, p, t).and_then(|u| step_down(dp, p + 1, &u)).map(|b| step_diff(&b, t));
            sink.check(Family::RoundTripNative, key, p, "", native);
            let r = moments(&wide, p, Representation::Traditional)
                .map_err(|e| e.to_string())
                .and_then(|tw| {
                    let up = step_up(&wide, p, &tw).map_err(|e| e.to_string())?;
                    let back = step_down(&wide, p + 1, &up).map_err(|e| e.to_string())?;
                    Ok(step_diff(&back, &tw))
                });
            sink.check(Family::RoundTrip, key, p, "", r);
        }
        if let Some(prev) = st.closed(p - 1) {
            sink.check(Family::StepDown, key, p, "", step_down(dp, p, t).map(|d| step_diff(&d, prev)));
        }
    }
    // upward chain from the initial data (1, epsilon)
    if st.contains(0) {
        let mut t = MomentTriple::from_pair(dp, 0, T::one(), dp.epsilon);
        for p in 0..st.range.max {
            match step_up(dp, p, &t) {
                Ok(next) => t = next,
                Err(e) => {
                    sink.skip(Family::ChainConsistency, Some(key), Some(p + 1), e);
                    break;
                }
            }
            if let Some(c) = st.closed(p + 1) {
                sink.push(Family::ChainConsistency, Some(key), Some(p + 1), "", step_diff(&t, c));
            }
        }
    }
}

fn transfer_checks<T: Real>(sink: &mut Sink, st: &State<T>) {
    let (key, dp) = (st.key, &st.dp);
    for p in st.range.iter() {
        if p == -1 {
            continue;
        }
        let s = match sink.s_at(dp, p) {
            Ok(s) => s,
            Err(e) => {
                sink.skip(Family::DetS, Some(key), Some(p), e);
                continue;
            }
        };
        sink.push(Family::DetS, Some(key), Some(p), "", s.det_residual());
        if let (Some(prev), Some(cur)) = (st.ab(p - 1), st.ab(p)) {
            sink.push(Family::TransferMatrix, Some(key), Some(p), "", moment_diff(s.apply(prev), cur));
        }
    }
}

fn three_term_checks<T: Real>(sink: &mut Sink, st: &State<T>) {
    let (key, dp) = (st.key, &st.dp);
    for p in st.range.iter() {
        if p == -1 || p == -2 {
            continue;
        }
        let pair = sink.s_at(dp, p).and_then(|s| Ok((s, sink.s_at(dp, p + 1)?)));
        let (s, s1) = match pair {
            Ok(x) => x,
            Err(e) => {
                sink.skip(Family::ThreeTermAlgebra, Some(key), Some(p), e);
                continue;
            }
        };
        for (detail, generic, explicit) in [
            ("a", three_term_a_generic_from(&s, &s1, p), three_term_a_coefficients(dp, p)),
            ("b", three_term_b_generic_from(&s, &s1, p), three_term_b_coefficients(dp, p)),
        ] {
            let r = generic.and_then(|g| explicit.map(|x| pair_diff(g, x)));
            sink.check(Family::ThreeTermAlgebra, key, p, detail, r);
        }
        for family in VectorFamily::ALL {
            let r = family_matrices_from(family, &s, &s1, p).and_then(|(m, n)| {
                let rebuilt = m.add(&n.mul(&s.inverse()?));
                Ok(rebuilt.max_rel_diff(&s1))
            });
            sink.check(Family::FamilyMatrixIdentity, key, p, family.name(), r);
        }
        let (Some(prev), Some(cur)) = (st.closed(p - 1), st.closed(p)) else { continue };
        let up = match step_up(dp, p, cur) {
            Ok(u) => u,
            Err(e) => {
                sink.skip(Family::VectorFamily, Some(key), Some(p), e);
                continue;
            }
        };
        sink.check(Family::ThreeTermA, key, p, "", three_term_a(dp, p, cur.a, prev.a).map(|x| rel_diff(x, up.a)));
        sink.check(Family::ThreeTermB, key, p, "", three_term_b(dp, p, cur.b, prev.b).map(|x| ((x - up.b).abs() / up.a.abs()).to_f64()));
        for family in VectorFamily::ALL {
            let r = family_matrices_from(family, &s, &s1, p).map(|(m, n)| {
                let (x, y) = (m.apply((cur.a, cur.b)), n.apply((prev.a, prev.b)));
                moment_diff((x.0 + y.0, x.1 + y.1), (up.a, up.b))
            });
            sink.check(Family::VectorFamily, key, p, family.name(), r);
        }
    }
}

/// `p -> -p-3` from every closed form whose image lies in the range.
fn reflection<T: Real>(sink: &mut Sink, st: &State<T>) {
    let (key, dp) = (st.key, &st.dp);
    for q in st.range.iter() {
        let Some(target) = st.closed(q) else { continue };
        let p = -q - 3;
        let Ok(source) = moments(dp, p, Representation::Traditional) else { continue };
        let r = crate::recurrence::reflect(dp, p, &source).map(|t| triple_diff(&t, target));
        sink.check(Family::Reflection, key, q, format!("from p={p}"), r);
    }
}

fn transform_checks<T: Real>(sink: &mut Sink, st: &State<T>) {
    let (key, dp) = (st.key, &st.dp);
    let wide = dp.widen();
    if st.contains(0) {
        let r = transform_t(dp, 0).map(|t0| {
            let (x, y) = t0.apply((T::one(), dp.epsilon));
            (x - 1.0).abs().max((y - 1.0).abs()).to_f64()
        });
        sink.check(Family::TransformInitial, key, 0, "", r);
    }
    for p in st.range.iter() {
        sink.check(Family::DetT, key, p, "", transform_t(dp, p).map(|t| t.det_residual()));
        if p != 0 {
            match transformed_transfer(dp, p) {
                Ok(closed) => {
                    sink.push(Family::DetTransformed, Some(key), Some(p), "", closed.det_residual());
                    let product = sink
                        .s_at(&wide, p)
                        .map_err(|e| e.to_string())
                        .and_then(|s| transformed_transfer_from(&wide, &s, p).map_err(|e| e.to_string()))
                        .map(|m| closed.max_rel_diff(&TransferMatrix::narrow(&m)));
                    sink.check(Family::TransformedSimilarity, key, p, "", product);
                }
                Err(e) => sink.skip(Family::DetTransformed, Some(key), Some(p), e),
            }
        }
        sink.check(
            Family::AppendixBPhysical,
            key,
            p,
            "",
            matrix_identity_residual(dp.epsilon, dp.kappa_r(), dp.nu, T::from_i64(i64::from(p))),
        );
    }
}

fn hahn_checks<T: Real>(sink: &mut Sink, st: &State<T>) {
    let (key, dp) = (st.key, &st.dp);
    let mut direct = BTreeMap::new();
    for p in st.range.min - 1..=st.range.max + 1 {
        if let Ok(pair) = hahn_pair_direct(dp, p) {
            direct.insert(p, pair);
        }
    }
    let mut iterated: Option<HahnPair<T>> = Some(HahnPair::initial());
    for p in 0..=st.range.max {
        if p > 0 {
            iterated = iterated.and_then(|prev| hahn_step(dp, &prev).ok());
        }
        if !st.contains(p) {
            continue;
        }
        if let (Some(d), Some(it)) = (direct.get(&p), iterated) {
            sink.push(Family::HahnAgreement, Some(key), Some(p), "iterated", pair_diff((d.x, d.y), (it.x, it.y)));
        }
    }
    for p in st.range.iter() {
        let (Some(d), Some(t)) = (direct.get(&p), st.closed(p)) else {
            sink.skip(Family::HahnAgreement, Some(key), Some(p), "no series or closed form at this power");
            continue;
        };
        let r = hahn_pair_from_moments(dp, t).map(|via| pair_diff((d.x, d.y), (via.x, via.y)));
        sink.check(Family::HahnAgreement, key, p, "transform", r);
    }
    let c = dp.nu * 2.0;
    let n = T::from_i64(i64::from(dp.n));
    for p in st.range.iter() {
        let (Some(a), Some(b), Some(z)) = (direct.get(&(p - 1)), direct.get(&p), direct.get(&(p + 1))) else {
            continue;
        };
        let w = DualHahnParams::special(0, c, T::from_i64(i64::from(p)));
        let rx = dual_hahn_residual(a.x, b.x, z.x, &w, n - 1.0);
        let ry = dual_hahn_residual(a.y, b.y, z.y, &w, n);
        sink.push(Family::DualHahnDifference, Some(key), Some(p), "", rx.max(ry));
    }
}

fn check_identities<T: Real>(sink: &mut Sink) {
    let grid = sink.cfg.identities.clone();
    let push = |sink: &mut Sink, family, c: IdentityCheck| {
        let detail = format!("{} n={} nu={}", c.name, c.n, c.nu);
        sink.push(family, None, Some(c.p as i32), detail, c.residual);
    };
    match identity_grid::<T>(1, grid.n_max, grid.p_max, &grid.nu) {
        Ok(checks) => checks.into_iter().for_each(|c| push(sink, Family::Identities, c)),
        Err(e) => sink.skip(Family::Identities, None, None, e),
    }
    // outside the asserted range, only where the series still terminate
    for &nu in &grid.nu {
        let nu = T::from_f64(nu);
        let l2 = (1..=grid.p_max).map(|p| IdentityName::L2.check(0, nu, p));
        let at_zero = IdentityName::ALL
            .into_iter()
            .flat_map(|name| (1..=grid.n_max).map(move |n| name.check(n, nu, 0)));
        for c in l2.chain(at_zero) {
            match c {
                Ok(c) => push(sink, Family::IdentityEdges, c),
                Err(e) => sink.skip(Family::IdentityEdges, None, None, e),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GridConfig {
        GridConfig {
            kappa_values: vec![-2, 1],
            n_values: vec![0, 2],
            mu_fractions: vec![0.5],
            p_range: PRange { min: -3, max: 4 },
            draws: 5,
            identities: IdentityGrid {
                n_max: 2,
                p_max: 2,
                nu: vec![1.0],
            },
            ..GridConfig::default()
        }
    }

    #[test]
    fn default_grid_passes() {
        let report = run_verification(&GridConfig::default()).unwrap();
        let failed: Vec<_> = report.records.iter().filter(|r| r.verdict == Verdict::Fail).take(10).collect();
        assert!(report.passed(), "{failed:#?}");
        for f in Family::ALL {
            assert!(report.family_records(f).next().is_some(), "{} has no records", f.name());
        }
    }

    #[test]
    fn deterministic_output() {
        let a = serde_json::to_string(&run_verification(&small()).unwrap()).unwrap();
        let b = serde_json::to_string(&run_verification(&small()).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_range_gives_no_records() {
        let cfg = GridConfig {
            p_range: PRange { min: 3, max: 2 },
            ..GridConfig::default()
        };
        let report = run_verification(&cfg).unwrap();
        assert!(report.records.is_empty());
        assert!(report.passed());
    }

    #[test]
    fn invalid_state_is_skipped() {
        let report = run_verification(&small()).unwrap();
        assert!(report
            .skipped
            .iter()
            .any(|s| s.family == "state" && s.state.is_some_and(|k| k.n == 0 && k.kappa == 1)));
    }

    #[test]
    fn corrupted_transfer_matrix_is_caught() {
        for entry in 0..4 {
            let cfg = GridConfig {
                fault: Some(Fault {
                    p: None,
                    entry,
                    delta: 1e-6,
                }),
                ..small()
            };
            let report = run_verification(&cfg).unwrap();
            let failed = report.failed_families();
            assert!(failed.contains(&"det_s"), "entry {entry}: {failed:?}");
            assert!(
                failed.contains(&"family_matrix_identity") || failed.contains(&"vector_family"),
                "entry {entry}: {failed:?}"
            );
        }
    }

    #[test]
    fn high_precision_grid_passes() {
        let cfg = GridConfig {
            precision: Precision::High,
            ..small()
        };
        let report = run_verification(&cfg).unwrap();
        assert!(report.passed(), "{:?}", report.failed_families());
        let worst = report.summary.families["identities"].max_residual.unwrap();
        assert!(worst < 1e-25, "{worst}");
    }
}
