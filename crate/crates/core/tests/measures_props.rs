use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use vortex_core::{HalfLineSheet, KadenMeasure, PowerLawRadial, VorticityMeasure};

fn family() -> impl Strategy<Value = (VorticityMeasure, f64, f64)> {
    prop_oneof![
        (0.1f64..5.0, 0.05f64..0.95).prop_map(|(c, a)| (
            PowerLawRadial::new(c, a).unwrap().into(),
            c,
            a
        )),
        (0.1f64..5.0, 0.05f64..0.95).prop_map(|(c, a)| (
            HalfLineSheet::new(c, a).unwrap().into(),
            c,
            a
        )),
        (0.55f64..0.95, 0.01f64..20.0).prop_map(|(mu, t)| {
            let k = KadenMeasure::new(mu, t).unwrap();
            let a = k.alpha();
            (k.into(), 1.0, a)
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ball_mass_is_a_power_law((m, c, alpha) in family(), r in 1e-3f64..10.0) {
        let expected = c * r.powf(alpha);
        prop_assert!((m.ball_mass(r) - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn unit_integrand_gives_ball_mass((m, _c, _a) in family(), r in 0.05f64..5.0) {
        let v = m.integrate(|_| Complex64::new(1.0, 0.0), 0.0, r).unwrap();
        let mass = m.ball_mass(r);
        prop_assert!((v.re - mass).abs() <= 1e-10 * mass, "{} vs {}", v.re, mass);
        prop_assert!(v.im.abs() <= 1e-10 * mass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn integration_is_linear(
        (m, _c, _a) in family(),
        p in proptest::collection::vec(-2.0f64..2.0, 3),
        q in proptest::collection::vec(-2.0f64..2.0, 3),
        r in 0.2f64..3.0,
    ) {
        let poly = |coef: &[f64], z: Complex64| coef[0] + z * coef[1] + z * z * coef[2];
        let (pc, qc) = (p.clone(), q.clone());
        let f = m.integrate(|z| poly(&pc, z), 0.0, r).unwrap();
        let g = m.integrate(|z| poly(&qc, z), 0.0, r).unwrap();
        let fg = m.integrate(|z| poly(&p, z) + poly(&q, z), 0.0, r).unwrap();
        let scale = m.ball_mass(r) * (1.0 + r * r) * 6.0;
        prop_assert!((fg - f - g).norm() <= 1e-10 * scale);
    }
}

#[test]
fn power_law_mass_implies_admissibility() {
    for k in 1..=18 {
        let alpha = 0.05 * k as f64;
        for c in [0.5, 1.0, 3.0] {
            let expected = c * alpha * PI / (PI * alpha).sin();
            for m in [
                VorticityMeasure::from(PowerLawRadial::new(c, alpha).unwrap()),
                VorticityMeasure::from(HalfLineSheet::new(c, alpha).unwrap()),
            ] {
                let closed = m.admissibility_integral();
                assert!(closed.is_finite());
                assert!((closed - expected).abs() <= 1e-8 * expected);
                // Independent check: ∫ (1+s)^{-1} cα s^{α−1} ds over the radial profile.
                let numeric = m
                    .integrate(
                        |z| Complex64::new(1.0 / (1.0 + z.norm()), 0.0),
                        0.0,
                        f64::INFINITY,
                    )
                    .unwrap();
                assert!(
                    (numeric.re - expected).abs() <= 1e-8 * expected,
                    "alpha {alpha}: {} vs {expected}",
                    numeric.re
                );
            }
        }
    }
}
