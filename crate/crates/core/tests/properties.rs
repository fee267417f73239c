use hqd_core::bounds::{phi_weight, xyz_params, PhiSpec};
use hqd_core::fourier::{ft_indicator, Frequency};
use hqd_core::geometry::{chord, ChordQuery, ConvexBody};
use hqd_core::pointsets::greedy_decompose;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_is_hermitian(x in -40.0f64..40.0, y in -40.0f64..40.0) {
        let b = ConvexBody::polygon(vec![[0.1, 0.1], [0.7, 0.2], [0.6, 0.6], [0.2, 0.5]]).unwrap();
        let a = ft_indicator(&b, &Frequency::continuous([x, y])).unwrap();
        let m = ft_indicator(&b, &Frequency::continuous([-x, -y])).unwrap();
        prop_assert!((a - m.conj()).norm() <= 1e-12);
        prop_assert!(a.norm() <= b.area + 1e-12);
    }

    #[test]
    fn chords_are_concave_in_depth(t in 0.0f64..6.28, f in 0.001f64..0.999, g in 0.001f64..0.999) {
        let b = ConvexBody::monomial_body(1.5).unwrap();
        let w = b.width(t);
        let (a, c) = (f.min(g) * w, f.max(g) * w);
        let k = |l: f64| chord(&b, &ChordQuery::new(t, l)).unwrap();
        let (ka, kc, km) = (k(a), k(c), k(0.5 * (a + c)));
        prop_assert!(ka > 0.0 && kc > 0.0 && km <= b.diameter + 1e-12);
        prop_assert!(km >= 0.5 * (ka + kc) - 1e-9);
    }

    #[test]
    fn phi_is_even_and_bounded(m1 in -400i64..400, m2 in -400i64..400) {
        let p = xyz_params(1 << 14, 1.5, 0.05).unwrap();
        let spec = PhiSpec::new(p.x, p.y, 2.0).unwrap();
        let v = phi_weight(&spec, [m1, m2]);
        prop_assert_eq!(v, phi_weight(&spec, [-m1, -m2]));
        prop_assert!((0.0..=0.2).contains(&v));
    }

    #[test]
    fn xyz_identities(n in 2u64..1_000_000_000, beta in 1.01f64..2.0, eps in 0.0f64..1.0) {
        let (a, b) = xyz_params(n, beta, eps).unwrap().identity_defects();
        prop_assert!(a <= 1e-9 && b <= 1e-9);
    }

    #[test]
    fn decomposition_invariants(n in 1u64..100_000_000, alpha in 0.4001f64..0.5) {
        prop_assert!(greedy_decompose(n, alpha).unwrap().check_invariants());
    }
}
