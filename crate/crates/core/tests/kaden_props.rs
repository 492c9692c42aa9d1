use std::f64::consts::PI;

use proptest::prelude::*;
use vortex_core::kaden::{similarity_residual, spiral_point};
use vortex_core::KadenParams;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn similarity_equations_hold(gamma in 0.01f64..10.0, mu in 0.51f64..0.99) {
        let (radial, tangential) = similarity_residual(gamma, mu).unwrap();
        prop_assert!(radial.norm() < 1e-12 && tangential.norm() < 1e-12, "{radial} {tangential}");
    }

    #[test]
    fn spiral_meets_each_circle_once(mu in 0.55f64..0.95, t in 0.01f64..100.0, r in 0.01f64..10.0) {
        let p = KadenParams::new(mu, t).unwrap();
        let z = spiral_point(r, &p);
        prop_assert!((z.norm() - r).abs() <= 1e-12 * r);
        let angle = (t / (2.0 * PI) * r.powf(-1.0 / mu)).rem_euclid(2.0 * PI);
        let got = z.arg().rem_euclid(2.0 * PI);
        let diff = (got - angle).abs();
        prop_assert!(diff.min(2.0 * PI - diff) < 1e-9, "{got} vs {angle}");
        // The modulus grows with the parameter, so no other parameter hits radius r.
        prop_assert!(spiral_point(r * 1.001, &p).norm() > z.norm());
    }
}
