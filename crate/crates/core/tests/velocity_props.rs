use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use vortex_core::velocity::{
    kernel_pair_average, kernel_pair_average_numeric, velocity_at, weak_identity_residuals,
    TestBump, WeakGrid,
};
use vortex_core::{
    AtomicMeasure, HalfLineSheet, KadenMeasure, PowerLawRadial, SignedVorticity, VorticityMeasure,
};

fn point() -> impl Strategy<Value = Complex64> {
    (0.0f64..3.0, 0.0f64..2.0 * PI).prop_map(|(rho, th)| Complex64::from_polar(rho, th))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_average_matches_quadrature(u in point(), v in point(), r in 0.2f64..2.5) {
        prop_assume!((u.norm() - r).abs() > 0.05 && (v.norm() - r).abs() > 0.05);
        let closed = kernel_pair_average(u, v, r).unwrap();
        let numeric = kernel_pair_average_numeric(u, v, r).unwrap();
        prop_assert!((closed - numeric).norm() < 1e-9, "{closed} vs {numeric}");
    }

    #[test]
    fn mean_inverse_square_distance(u in point(), r in 0.2f64..2.5) {
        prop_assume!((u.norm() - r).abs() > 0.05);
        // (2π)^{-1}∫ |u − re^{iθ}|^{-2} dθ = 1/|r² − |u|²|.
        let avg = kernel_pair_average_numeric(u, u.conj(), r).unwrap();
        prop_assert!((avg.re - 1.0 / (r * r - u.norm_sqr()).abs()).abs() < 1e-9);
        prop_assert!(avg.im.abs() < 1e-9);
    }
}

fn measures() -> Vec<VorticityMeasure> {
    vec![
        PowerLawRadial::new(1.0, 0.5).unwrap().into(),
        HalfLineSheet::new(0.7, 0.4).unwrap().into(),
        KadenMeasure::new(0.75, 1.0).unwrap().into(),
        AtomicMeasure::from_pairs([
            (Complex64::new(0.3, 0.2), 1.0),
            (Complex64::new(-1.0, 0.5), 0.5),
        ])
        .unwrap()
        .into(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn velocity_is_linear(i in 0usize..4, j in 0usize..4, z in point()) {
        let ms = measures();
        let (a, b) = (&ms[i], &ms[j]);
        let sum = velocity_at(&SignedVorticity::new(a.clone(), b.clone()), z);
        let (va, vb) = (velocity_at(a, z), velocity_at(b, z));
        if let (Ok(s), Ok(x), Ok(y)) = (sum, va, vb) {
            prop_assert!((s - (x - y)).norm() <= 1e-10 * (1.0 + x.norm() + y.norm()));
        }
    }
}

#[test]
fn weak_residuals_shrink_under_refinement() {
    let bump = TestBump::new(Complex64::new(0.0, 0.0), 1.0, 4).unwrap();
    for m in measures() {
        let coarse_grid = WeakGrid {
            radial_panels: 4,
            angular_panels: 4,
            order: 4,
            ..WeakGrid::default()
        };
        let coarse = weak_identity_residuals(&m, &bump, coarse_grid).unwrap();
        let fine = weak_identity_residuals(&m, &bump, coarse_grid.refined()).unwrap();
        let worst = |r: &vortex_core::velocity::WeakResiduals| r.div_residual.max(r.curl_residual);
        assert!(
            worst(&fine) <= worst(&coarse) || worst(&fine) < 1e-10,
            "{m:?}: {coarse:?} -> {fine:?}"
        );
    }
}
