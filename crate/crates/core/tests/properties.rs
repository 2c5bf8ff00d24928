mod common;

use common::*;
use proptest::prelude::*;

use ricci_core::a49::{master_residual, sample_frame};
use ricci_core::algebra::{Family, LieAlgebraSpec};
use ricci_core::search::{realizability_search, SearchReport};
use ricci_core::signature::{classify, signature_index};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn jacobi_across_catalog(spec in any_spec()) {
        jacobi_holds(&spec)?;
    }

    #[test]
    fn bracket_is_bilinear_and_antisymmetric(
        spec in any_spec(), x in any_vec4(), y in any_vec4(), z in any_vec4(), c in -3.0..3.0f64,
    ) {
        bracket_bilinear(&spec, &x, &y, &z, c)?;
    }

    #[test]
    fn ricci_scales_inversely(spec in any_spec(), q in any_metric(), c in 0.05..20.0f64) {
        scaling_law(&spec, &q, c)?;
    }

    #[test]
    fn frame_constants_scale(spec in any_spec(), q in any_metric(), c in 0.05..20.0f64) {
        frame_scaling(&spec, &q, c)?;
    }

    #[test]
    fn eigenvalues_invariant_under_rotation(s in any_symmetric(), o in any_orthogonal()) {
        conjugation_invariance(&s, &o)?;
    }

    #[test]
    fn trace_is_eigenvalue_sum(spec in any_spec(), q in any_metric()) {
        trace_matches_eigenvalues(&spec, &q)?;
    }

    #[test]
    fn explicit_a49_matches_engine(seed in 0u64..1000, index in 0u64..1_000_000) {
        let p = sample_frame(seed, index, -1.0, 1.0);
        let r = master_residual(&p).unwrap();
        prop_assert!(r <= 1e-10, "residual {r} at {p:?}");
    }

    #[test]
    fn classify_is_scale_free(eigs in prop::collection::vec(-10.0..10.0f64, 4), c in 0.01..100.0f64) {
        let mut eigs = eigs;
        eigs.sort_by(f64::total_cmp);
        let scale = eigs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let scaled: Vec<f64> = eigs.iter().map(|x| x * c).collect();
        let s1 = classify(&eigs, scale);
        let s2 = classify(&scaled, scale * c);
        if scale >= 1.0 && scale * c >= 1.0 {
            prop_assert_eq!(&s1, &s2);
        }
        prop_assert!(signature_index(&s1).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn report_json_round_trip(i in 0..Family::ALL.len(), u in 0.0..1.0f64, v in 0.0..1.0f64, seed in any::<u64>()) {
        let spec = spec_from(Family::ALL[i], u, v);
        let report = realizability_search(&spec, 200, seed).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: SearchReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &report);
        prop_assert!(back.replay().unwrap());
    }

    #[test]
    fn search_is_deterministic(seed in any::<u64>()) {
        let spec = LieAlgebraSpec::a49(-0.25);
        let a = realizability_search(&spec, 300, seed).unwrap();
        let b = realizability_search(&spec, 300, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
