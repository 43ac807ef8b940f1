//! Terminating series against exact rational summation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rcm_core::hypergeom::{gamma_ratio, hyp3f2, hyp_terminating_detailed, pochhammer, SeriesSpec};
use rcm_core::DoubleDouble;

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn dd_rat(x: DoubleDouble) -> BigRational {
    rat(x.hi()) + rat(x.lo())
}

/// Value and magnitude sum of `pFq(upper; lower; 1)`, exactly.
fn exact_series(upper: &[BigRational], lower: &[BigRational]) -> (BigRational, BigRational) {
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut abs_sum = BigRational::zero();
    for k in 0.. {
        if term.is_zero() {
            break;
        }
        sum += &term;
        abs_sum += term.abs();
        let kk = BigRational::from_integer(BigInt::from(k));
        for u in upper {
            term *= u + &kk;
        }
        for l in lower {
            term /= l + &kk;
        }
        term /= &kk + BigRational::one();
    }
    (sum, abs_sum)
}

/// Dyadic rationals in `[-50, 50]`, exactly representable as `f64`.
fn dyadic() -> impl Strategy<Value = f64> {
    (-400i32..=400, prop::sample::select(vec![1.0, 2.0, 4.0, 8.0])).prop_map(|(num, den)| f64::from(num) / den)
}

/// Lower parameters that are not nonpositive integers.
fn lower_param() -> impl Strategy<Value = f64> {
    dyadic().prop_filter("no pole", |x| !(*x <= 0.0 && x.fract() == 0.0))
}

fn spec() -> impl Strategy<Value = (u32, [f64; 2], [f64; 2])> {
    (0u32..=30, [dyadic(), dyadic()], [lower_param(), lower_param()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn double_path_matches_exact_sum((m, up, lo) in spec()) {
        let upper = [-f64::from(m), up[0], up[1]];
        let approx = hyp_terminating_detailed(&SeriesSpec::new(upper, lo)).unwrap();
        let (exact, abs_sum) = exact_series(&upper.map(rat), &lo.map(rat));
        let err = (rat(approx.value) - &exact).abs().to_f64().unwrap();
        let abs_sum = abs_sum.to_f64().unwrap();
        let value = exact.abs().to_f64().unwrap();
        // backward-stable in the sum of magnitudes, plus the final rounding
        prop_assert!(err <= 1e-13 * abs_sum.max(value), "err {err} abs_sum {abs_sum}");
        if value > 0.0 && abs_sum / value <= 1e15 {
            prop_assert!(err <= 1e-13 * value, "rel err {} cond {}", err / value, abs_sum / value);
        }
    }

    #[test]
    fn double_double_path_matches_exact_sum((m, up, lo) in spec()) {
        let upper = [-f64::from(m), up[0], up[1]].map(DoubleDouble::from);
        let lower = lo.map(DoubleDouble::from);
        let approx = hyp_terminating_detailed(&SeriesSpec::new(upper, lower)).unwrap();
        let (exact, abs_sum) = exact_series(&upper.map(dd_rat), &lower.map(dd_rat));
        let err = (dd_rat(approx.value) - &exact).abs().to_f64().unwrap();
        let abs_sum = abs_sum.to_f64().unwrap();
        prop_assert!(err <= 1e-29 * abs_sum, "err {err} abs_sum {abs_sum}");
    }

    #[test]
    fn permuting_parameters_changes_nothing((m, up, lo) in spec()) {
        let a = hyp3f2([-f64::from(m), up[0], up[1]], lo).unwrap();
        let b = hyp3f2([up[1], -f64::from(m), up[0]], [lo[1], lo[0]]).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn pochhammer_is_exact_on_dyadics(x in dyadic(), k in 0u32..12) {
        let mut exact = BigRational::one();
        for j in 0..k {
            exact *= rat(x) + BigRational::from_integer(BigInt::from(j));
        }
        let got = rat(pochhammer(x, k));
        let scale = exact.abs().to_f64().unwrap().max(f64::MIN_POSITIVE);
        prop_assert!((got - &exact).abs().to_f64().unwrap() <= 2.0 * f64::EPSILON * scale);
    }

    #[test]
    fn gamma_ratio_inverts(x in 0.1f64..40.0, k in 0i32..10) {
        let up = gamma_ratio(x, k).unwrap();
        let down = gamma_ratio(x + f64::from(k), -k).unwrap();
        prop_assert!((up * down - 1.0).abs() < 1e-14);
    }
}

#[test]
fn known_closed_values() {
    // Chu-Vandermonde: 2F1(-m, b; c; 1) = (c-b)_m / (c)_m
    for (m, b, c) in [(3u32, 0.5, 2.25), (7, -2.5, 4.0), (12, 3.0, 0.75)] {
        let spec = SeriesSpec::new(vec![-f64::from(m), b], vec![c]);
        let got = hyp_terminating_detailed(&spec).unwrap().value;
        let expected = pochhammer(c - b, m) / pochhammer(c, m);
        assert!((got - expected).abs() <= 1e-14 * expected.abs(), "{m} {b} {c}");
    }
}
