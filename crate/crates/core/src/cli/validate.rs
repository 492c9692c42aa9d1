//! Self-checks run by `vortex validate`: series against direct quadrature,
//! closed forms, and the power-law energy bounds.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::table::Table;
use crate::energy::{
    closed_form_average, kinetic_energy_with, power_law_bounds, spherical_average,
    spherical_average_direct, EnergyMethod, EnergyOptions,
};
use crate::error::Result;
use crate::measures::{
    AtomicMeasure, HalfLineSheet, KadenMeasure, PowerLawRadial, VorticityMeasure,
};
use crate::moments::SpectrumOptions;
use crate::velocity::{kernel_pair_average, kernel_pair_average_numeric};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Observed error or margin; NaN when the computation failed.
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub error: Option<String>,
}

impl Check {
    fn within(name: String, value: Result<f64>, tolerance: f64) -> Self {
        // Names end up in a CSV cell.
        let name = name.replace(',', " ");
        match value {
            Ok(v) => Self {
                name,
                value: v,
                tolerance,
                passed: v <= tolerance,
                error: None,
            },
            Err(e) => Self {
                name,
                value: f64::NAN,
                tolerance,
                passed: false,
                error: Some(e.to_string()),
            },
        }
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Deterministic low-discrepancy points in `[0, 1)`.
fn weyl(k: usize, dim: usize) -> f64 {
    const STEPS: [f64; 3] = [
        0.618_033_988_749_895,
        0.414_213_562_373_095,
        0.732_050_807_568_877,
    ];
    ((k + 1) as f64 * STEPS[dim % 3]).fract()
}

fn atomic_family(count: usize) -> Vec<AtomicMeasure> {
    (0..count)
        .map(|k| {
            let n = 2 + k % 4;
            let atoms = (0..n).map(|j| {
                let i = 7 * k + j;
                let rho = 0.2 + 2.5 * weyl(i, 0);
                let rho = if (rho - 1.0).abs() < 0.05 {
                    rho + 0.1
                } else {
                    rho
                };
                let pos = Complex64::from_polar(rho, 2.0 * PI * weyl(i, 1));
                (pos, 0.1 + weyl(i, 2))
            });
            AtomicMeasure::from_pairs(atoms).expect("valid atoms")
        })
        .collect()
}

pub fn run_suite(energy: EnergyOptions) -> Vec<Check> {
    let spectrum = SpectrumOptions {
        rel_tol: energy.spectrum.rel_tol,
        ..SpectrumOptions::default()
    };
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    let mut failure = None;
    for k in 0..40 {
        let u = Complex64::from_polar(0.1 + 2.0 * weyl(k, 0), 2.0 * PI * weyl(k, 1));
        let v = Complex64::from_polar(0.1 + 2.0 * weyl(k, 2), 2.0 * PI * weyl(k + 11, 0));
        let r = 0.6 + 0.8 * weyl(k + 5, 1);
        if (u.norm() - r).abs() < 0.05 || (v.norm() - r).abs() < 0.05 {
            continue;
        }
        match (
            kernel_pair_average(u, v, r),
            kernel_pair_average_numeric(u, v, r),
        ) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).norm() / b.norm().max(1.0)),
            (Err(e), _) | (_, Err(e)) => failure = Some(e),
        }
    }
    out.push(Check::within(
        "kernel_identity".into(),
        failure.map_or(Ok(worst), Err),
        1e-9,
    ));

    for (k, m) in atomic_family(6).into_iter().enumerate() {
        let m: VorticityMeasure = m.into();
        let value = (|| {
            Ok(rel_err(
                spherical_average(&m, 1.0, spectrum)?.value,
                spherical_average_direct(&m, 1.0)?,
            ))
        })();
        out.push(Check::within(
            format!("series_vs_direct(atoms#{k},r=1)"),
            value,
            1e-6,
        ));
    }
    for mu in [0.6, 0.75, 0.9] {
        let value = (|| {
            let m: VorticityMeasure = KadenMeasure::new(mu, 1.0)?.into();
            Ok(rel_err(
                spherical_average(&m, 1.0, spectrum)?.value,
                spherical_average_direct(&m, 1.0)?,
            ))
        })();
        out.push(Check::within(
            format!("series_vs_direct(kaden:mu={mu},t=1,r=1)"),
            value,
            1e-6,
        ));
    }

    for alpha in [0.25, 0.5, 0.75] {
        for (label, m) in [
            (
                "powerlaw",
                VorticityMeasure::from(PowerLawRadial::new_unchecked(1.0, alpha)),
            ),
            (
                "halfline",
                VorticityMeasure::from(HalfLineSheet::new_unchecked(1.0, alpha)),
            ),
        ] {
            let value = (|| {
                let exact = closed_form_average(&m, 1.5).expect("analytic family");
                Ok(rel_err(spherical_average(&m, 1.5, spectrum)?.value, exact))
            })();
            out.push(Check::within(
                format!("closed_form_average({label},alpha={alpha},r=1.5)"),
                value,
                1e-10,
            ));
        }
    }

    let atom: VorticityMeasure = AtomicMeasure::from_pairs([(Complex64::new(1.0, 0.0), 1.0)])
        .expect("one atom")
        .into();
    out.push(Check::within(
        "point_vortex_average(r=0.5)".into(),
        spherical_average(&atom, 0.5, spectrum).map(|a| (a.value - 1.0 / (3.0 * PI * PI)).abs()),
        1e-9,
    ));

    let numeric = EnergyOptions {
        method: EnergyMethod::Series,
        ..energy
    };
    for c in [0.5, 2.0] {
        for alpha in [0.25, 0.5, 0.75] {
            for r in [0.5, 2.0] {
                let tag = format!("c={c},alpha={alpha},r={r}");
                let value = (|| {
                    let b = power_law_bounds(c, alpha, r)?;
                    let lo = kinetic_energy_with(
                        &VorticityMeasure::from(PowerLawRadial::new(c, alpha)?),
                        r,
                        numeric,
                    )?;
                    let hi = kinetic_energy_with(
                        &VorticityMeasure::from(HalfLineSheet::new(c, alpha)?),
                        r,
                        numeric,
                    )?;
                    Ok(rel_err(lo, b.lower).max(rel_err(hi, b.upper)))
                })();
                out.push(Check::within(
                    format!("extremal_energies({tag})"),
                    value,
                    1e-6,
                ));
            }
        }
    }
    for mu in [0.6, 0.75, 0.9] {
        let value = (|| {
            let k = KadenMeasure::new(mu, 1.0)?;
            let b = power_law_bounds(1.0, k.alpha(), 1.0)?;
            let e = kinetic_energy_with(&VorticityMeasure::from(k), 1.0, energy)?;
            // Signed distance outside [lower, upper], relative to upper.
            Ok(((b.lower - e).max(e - b.upper)) / b.upper)
        })();
        out.push(Check::within(
            format!("energy_within_bounds(kaden:mu={mu},t=1,r=1)"),
            value,
            1e-8,
        ));
    }
    out
}

pub fn table(checks: &[Check]) -> Table {
    let mut t = Table::new(&["check", "value", "tolerance", "pass"]);
    for c in checks {
        t.push(vec![
            c.name.clone().into(),
            c.value.into(),
            c.tolerance.into(),
            c.passed.into(),
        ]);
    }
    t
}
