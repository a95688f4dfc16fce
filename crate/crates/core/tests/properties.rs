use proptest::prelude::*;

use quatgeom::exact::rational_approximation;
use quatgeom::orbit::{
    apply_group, canonicalize, class_distance, classify, frame_from_angles, random_frame_seeded,
    random_group_element_seeded, reconstruct, DEFAULT_CLASSIFY_TOL,
};
use quatgeom::quat::{qmul, Quaternion};

fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-2.0..2.0f64).prop_map(Quaternion::from_array)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn norm_is_multiplicative(p in quaternion(), q in quaternion()) {
        let lhs = qmul(p, q).norm();
        prop_assert!((lhs - p.norm() * q.norm()).abs() <= 1e-12 * (1.0 + lhs));
    }

    #[test]
    fn conjugation_reverses_products(p in quaternion(), q in quaternion()) {
        let a = qmul(p, q).conj().to_array();
        let b = qmul(q.conj(), p.conj()).to_array();
        for i in 0..4 {
            prop_assert!((a[i] - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn invariants_survive_the_group(k in 2usize..=4, seed in any::<u64>()) {
        let f = random_frame_seeded(k, seed);
        let g = random_group_element_seeded(seed ^ 0x9e37_79b9);
        let a = classify(&f, DEFAULT_CLASSIFY_TOL).unwrap();
        let b = classify(&apply_group(&f, &g), DEFAULT_CLASSIFY_TOL).unwrap();
        prop_assert!(class_distance(&a.lam, &b.lam).unwrap() < 1e-6);
    }

    #[test]
    fn torus_points_reconstruct(theta in prop::collection::vec(0.0..std::f64::consts::TAU, 2..=4)) {
        let lam = classify(&frame_from_angles(&theta).unwrap(), DEFAULT_CLASSIFY_TOL).unwrap().lam;
        let back = classify(&reconstruct(&lam, DEFAULT_CLASSIFY_TOL).unwrap(), DEFAULT_CLASSIFY_TOL).unwrap();
        prop_assert!(class_distance(&back.lam, &canonicalize(&lam)).unwrap() < 1e-6);
    }

    #[test]
    fn small_fractions_are_recovered(p in -500i64..500, q in 1i64..500) {
        let (n, d) = rational_approximation(p as f64 / q as f64, 1_000_000, 1e-11).unwrap();
        prop_assert_eq!(n * q as i128, p as i128 * d);
    }
}
