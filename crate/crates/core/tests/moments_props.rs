use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use vortex_core::moments::{inner_moment, outer_moment};
use vortex_core::quadrature::gauss_legendre;
use vortex_core::{
    HalfLineSheet, KadenMeasure, KadenParams, PowerLawRadial, SignedVorticity, VorticityMeasure,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

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
        (0.55f64..0.95, 0.05f64..20.0).prop_map(|(mu, t)| {
            let k = KadenMeasure::new(mu, t).unwrap();
            let a = k.alpha();
            (k.into(), 1.0, a)
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn moments_obey_mass_bounds((m, c, alpha) in family(), r in 0.2f64..3.0) {
        for n in (0..=30).step_by(3) {
            let bound = c * alpha / (n as f64 + alpha) * r.powf(n as f64 + alpha);
            let v = inner_moment(&m, r, n).unwrap().norm();
            prop_assert!(v <= bound * (1.0 + 1e-9), "n = {n}: {v} > {bound}");
        }
        for k in (1..=30).step_by(3) {
            let bound = c * alpha / (k as f64 - alpha) * r.powf(alpha - k as f64);
            let v = outer_moment(&m, r, k).unwrap().norm();
            prop_assert!(v <= bound * (1.0 + 1e-9), "k = {k}: {v} > {bound}");
        }
    }

    #[test]
    fn signed_moments_are_differences(
        (a, _, _) in family(),
        (b, _, _) in family(),
        r in 0.2f64..3.0,
        n in 0usize..12,
    ) {
        let d = SignedVorticity::new(a.clone(), b.clone());
        let lhs = inner_moment(&d, r, n).unwrap();
        let rhs = inner_moment(&a, r, n).unwrap() - inner_moment(&b, r, n).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        let k = n + 1;
        let lhs = outer_moment(&d, r, k).unwrap();
        let rhs = outer_moment(&a, r, k).unwrap() - outer_moment(&b, r, k).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
}

/// `∫_0^r s^{n+1} e^{inθ(s)} ds` by Gauss-Legendre panels between
/// consecutive full turns, truncated where the remainder is below `1e-14`.
fn by_parts_remainder(p: &KadenParams, r: f64, n: usize) -> Complex64 {
    let (x, w) = gauss_legendre(24);
    let nf = n as f64;
    let cut = (1e-14 * (nf + 2.0)).powf(1.0 / (nf + 2.0)).min(r);
    let f = |s: f64| Complex64::from_polar(s.powf(nf + 1.0), nf * p.phase(s));
    // Panel edges where nθ(s) crosses a multiple of π.
    let mut edges = vec![r];
    let mut k = (nf * p.phase(r) / PI).floor() + 1.0;
    loop {
        let s = p.radius_at_phase(k * PI / nf);
        if s <= cut {
            break;
        }
        edges.push(s);
        k += 1.0;
    }
    edges.push(cut.min(*edges.last().unwrap()));
    let mut acc = Complex64::new(0.0, 0.0);
    for e in edges.windows(2) {
        let (hi, lo) = (e[0], e[1]);
        let h = 0.5 * (hi - lo);
        for (xi, wi) in x.iter().zip(&w) {
            acc += f(lo + h * (1.0 + xi)) * (wi * h);
        }
    }
    acc
}

#[test]
fn kaden_inner_moments_match_integration_by_parts() {
    for (mu, t) in [(0.6, 1.0), (0.75, 0.5), (0.75, 2.0), (0.9, 1.0)] {
        let p = KadenParams::new(mu, t).unwrap();
        let m: VorticityMeasure = KadenMeasure::from_params(p).into();
        let alpha = p.alpha();
        for r in [0.5f64, 1.0] {
            for n in 1..=4 {
                let nf = n as f64;
                let boundary = Complex64::from_polar(r.powf(nf + 2.0), nf * p.phase(r));
                let oracle = -(boundary - by_parts_remainder(&p, r, n) * (nf + 2.0))
                    * (2.0 * PI * mu * alpha)
                    / (I * t * nf);
                let got = inner_moment(&m, r, n).unwrap();
                assert!(
                    (got - oracle).norm() <= 1e-7 * oracle.norm(),
                    "mu {mu} t {t} r {r} n {n}: {got} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn kaden_second_outer_moment_closed_form() {
    for (mu, t) in [(0.6, 0.5), (0.75, PI), (0.75, 10.0), (0.9, 2.0)] {
        let p = KadenParams::new(mu, t).unwrap();
        let m: VorticityMeasure = KadenMeasure::from_params(p).into();
        for r in [0.5f64, 1.0, 2.0] {
            let alpha = p.alpha();
            let closed =
                (1.0 - (-I * (t / PI) * r.powf(-1.0 / mu)).exp()) * (alpha * PI * mu) / (I * t);
            let got = outer_moment(&m, r, 2).unwrap();
            assert!(
                (got - closed).norm() <= 1e-10 * closed.norm().max(1.0),
                "mu {mu} t {t} r {r}: {got} vs {closed}"
            );
        }
    }
}
