use proptest::prelude::*;
use rcm_core::closedform::{linear_relation_residual, moments};
use rcm_core::dualhahn::{hahn_pair_direct, hahn_pair_from_moments, transformed_transfer};
use rcm_core::identities::IdentityName;
use rcm_core::recurrence::{reflect, s_matrix, step_down, step_up};
use rcm_core::{derive_params, DerivedParams, DoubleDouble, MomentTriple, QuantumNumbers, Real, Representation};

fn state() -> impl Strategy<Value = QuantumNumbers> {
    (
        0u32..8,
        prop::sample::select(vec![-4, -3, -2, -1, 1, 2, 3, 4]),
        0.05f64..0.95,
        0.5f64..3.0,
    )
        .prop_filter_map("bound state", |(n, kappa, frac, beta)| {
            QuantumNumbers::with_beta(n, kappa, frac * f64::from(kappa.unsigned_abs()), beta).ok()
        })
}

fn gap<T: Real>(x: &MomentTriple<T>, y: &MomentTriple<T>) -> f64 {
    let scale = x.a.abs().max(y.a.abs());
    ((x.a - y.a).abs().max((x.b - y.b).abs()) / scale).to_f64()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn moments_are_bounded_by_a(qn in state(), p in -3i32..12) {
        let d: DerivedParams = derive_params(&qn).unwrap();
        prop_assume!(p != -1 && d.admissibility(p).is_direct());
        let t = moments(&d, p, Representation::Traditional).unwrap();
        // A = int(G^2 + F^2), B = int(G^2 - F^2), C = int(G F)
        prop_assert!(t.a > 0.0);
        prop_assert!(t.b.abs() <= t.a * (1.0 + 1e-12));
        prop_assert!(t.c.abs() <= 0.5 * t.a * (1.0 + 1e-12));
        prop_assert!(linear_relation_residual(&d, &t) < 1e-11);
    }

    #[test]
    fn step_round_trip_in_double_double(qn in state(), p in 0i32..10) {
        let d: DerivedParams<DoubleDouble> = derive_params(&qn).unwrap();
        let t = moments(&d, p, Representation::NikiforovUvarov).unwrap();
        let up = step_up(&d, p, &t).unwrap();
        let back = step_down(&d, p + 1, &up).unwrap();
        prop_assert!(gap(&back, &t) < 1e-22, "{}", gap(&back, &t));
    }

    #[test]
    fn transfer_determinant_closed_form(qn in state(), p in -4i32..14) {
        prop_assume!(p != -1);
        let d: DerivedParams<DoubleDouble> = derive_params(&qn).unwrap();
        let s = s_matrix(&d, p).unwrap();
        prop_assert!(s.det_residual() < 1e-26);
    }

    #[test]
    fn reflection_is_an_involution(qn in state(), p in 0i32..6) {
        let d: DerivedParams<DoubleDouble> = derive_params(&qn).unwrap();
        let q = -p - 3;
        prop_assume!(d.admissibility(q).is_direct());
        let t = moments(&d, p, Representation::Traditional).unwrap();
        let there = reflect(&d, p, &t).unwrap();
        let back = reflect(&d, q, &there).unwrap();
        prop_assert_eq!(back.p, p);
        prop_assert!(gap(&back, &t) < 1e-24);
        let direct = moments(&d, q, Representation::Traditional).unwrap();
        prop_assert!(gap(&there, &direct) < 1e-22);
    }

    #[test]
    fn transformed_transfer_determinant(qn in state(), p in 1i32..12) {
        prop_assume!(qn.n >= 1);
        let d: DerivedParams = derive_params(&qn).unwrap();
        let s = transformed_transfer(&d, p).unwrap();
        let two_nu = 2.0 * d.nu;
        let expected = (two_nu - f64::from(p)) / (two_nu + f64::from(p));
        prop_assert!((s.entrywise_det() - expected).abs() <= 1e-11 * s.max_abs() * s.max_abs());
    }

    #[test]
    fn hahn_pair_by_transform(qn in state(), p in 0i32..10) {
        prop_assume!(qn.n >= 1);
        let d: DerivedParams<DoubleDouble> = derive_params(&qn).unwrap();
        let direct = hahn_pair_direct(&d, p).unwrap();
        let via = hahn_pair_from_moments(&d, &moments(&d, p, Representation::Traditional).unwrap()).unwrap();
        let scale = direct.x.abs().max(direct.y.abs()).max(DoubleDouble::ONE);
        prop_assert!(((direct.x - via.x).abs() / scale).to_f64() < 1e-24);
        prop_assert!(((direct.y - via.y).abs() / scale).to_f64() < 1e-24);
    }

    #[test]
    fn identities_hold_off_grid(n in 1u32..10, p in 1u32..10, nu in 0.05f64..6.0) {
        for name in IdentityName::ALL {
            let c = name.check(n, DoubleDouble::from(nu), p).unwrap();
            prop_assert!(c.residual < 1e-24, "{name} n={n} p={p} nu={nu}: {}", c.residual);
        }
    }
}
