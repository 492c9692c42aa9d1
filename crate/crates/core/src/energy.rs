//! Spherical averages of `|v|²`, local kinetic energy and the power-law
//! energy bounds.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{require, Result, VortexError};
use crate::measures::{Vorticity, VorticityMeasure};
use crate::moments::{moment_spectrum, SpectrumOptions};
use crate::quadrature::{gauss_legendre, integrate_power_tail, integrate_with_breaks, Tolerance};
use crate::velocity::{velocity_at_with, VelocityOptions};

/// `A_r` from the moment series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphericalAverage {
    pub r: f64,
    pub value: f64,
    /// Certified bound on the omitted part of `A_r`.
    pub tail_bound: f64,
    /// Extrapolated omitted part, already included in `value`.
    pub tail_estimate: f64,
    pub terms: usize,
    pub converged: bool,
}

fn check_radius<V: Vorticity + ?Sized>(m: &V, r: f64, window: f64) -> Result<()> {
    require(r > 0.0 && r.is_finite(), "r", r, "radius must be positive")?;
    for (_, c) in m.components() {
        if let Some(&modulus) = c
            .singular_radii()
            .iter()
            .find(|&&s| (s - r).abs() <= window)
        {
            return Err(VortexError::SingularRadius { r, modulus });
        }
    }
    Ok(())
}

/// `A_r = (2π)^{−1} ∫ |v(re^{iθ})|² dθ` through the moment series.
///
/// Rejects radii that carry an atom; other radii are evaluated as given, and a
/// series that is still unconverged at `n_max` is flagged, not rejected.
pub fn spherical_average<V: Vorticity + ?Sized>(
    m: &V,
    r: f64,
    opts: SpectrumOptions,
) -> Result<SphericalAverage> {
    check_radius(m, r, 0.0)?;
    let s = moment_spectrum(m, r, opts)?;
    let norm = 4.0 * PI * PI;
    Ok(SphericalAverage {
        r,
        value: s.series_value() / norm,
        tail_bound: s.tail_bound / norm,
        tail_estimate: s.tail_estimate / norm,
        terms: s.truncation(),
        converged: s.converged,
    })
}

/// Angles in `[0, 2π)` where the support meets the circle `|u| = r`.
fn crossing_angles<V: Vorticity + ?Sized>(m: &V, r: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for (_, c) in m.components() {
        match c {
            VorticityMeasure::Kaden(k) => out.push(k.params().phase(r).rem_euclid(2.0 * PI)),
            VorticityMeasure::HalfLine(_) => out.push(0.0),
            VorticityMeasure::Atomic(a) => out.extend(
                a.atoms()
                    .iter()
                    .map(|at| at.position.arg().rem_euclid(2.0 * PI)),
            ),
            VorticityMeasure::PowerLaw(_) => {}
        }
    }
    out
}

/// `A_r` by adaptive quadrature of `|v|²` along the circle, with velocities
/// from the direct Biot-Savart integral. Independent of the moment series.
pub fn spherical_average_direct<V: Vorticity + ?Sized>(m: &V, r: f64) -> Result<f64> {
    spherical_average_direct_with(m, r, Tolerance::new(1e-15, 1e-10))
}

pub fn spherical_average_direct_with<V: Vorticity + ?Sized>(
    m: &V,
    r: f64,
    tol: Tolerance,
) -> Result<f64> {
    check_radius(m, r, 1e-6)?;
    let crossings = crossing_angles(m, r);
    let start = crossings.first().copied().unwrap_or(0.0);
    let breaks: Vec<f64> = crossings
        .iter()
        .map(|&a| start + (a - start).rem_euclid(2.0 * PI))
        .collect();
    let vopts = VelocityOptions {
        tol: Tolerance::new(1e-15, 1e-12),
        ..VelocityOptions::default()
    };
    let mut failure = None;
    let est = integrate_with_breaks(
        |th: f64| match velocity_at_with(m, Complex64::from_polar(r, th), vopts) {
            Ok(v) => Complex64::new(v.norm_sqr(), 0.0),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        start,
        start + 2.0 * PI,
        &breaks,
        tol,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(est.value.re / (2.0 * PI)),
    }
}

/// How [`kinetic_energy_with`] obtains `A_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum EnergyMethod {
    /// Closed form for a single power-law or half-line measure, series otherwise.
    #[default]
    Auto,
    Series,
    Direct,
}

#[derive(Debug, Clone, Copy)]
pub struct EnergyOptions {
    pub method: EnergyMethod,
    pub spectrum: SpectrumOptions,
    pub tol: Tolerance,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        Self {
            method: EnergyMethod::Auto,
            spectrum: SpectrumOptions {
                n_max: 64,
                ..SpectrumOptions::default()
            },
            tol: Tolerance::new(1e-15, 1e-8),
        }
    }
}

impl EnergyOptions {
    pub fn with_method(method: EnergyMethod) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    /// Same relative tolerance plus an absolute floor of `0.1·rel·scale`.
    ///
    /// Meant for differences of two fields whose own energies are of size
    /// `scale`; without the floor a near-cancellation is refined to relative
    /// accuracy of a tiny number.
    pub fn with_abs_floor(self, scale: f64) -> Self {
        Self {
            tol: Tolerance {
                abs: 0.1 * self.tol.rel * scale.abs(),
                ..self.tol
            },
            ..self
        }
    }

    /// Overrides the relative tolerance of both the radial quadrature and
    /// the moment series.
    pub fn with_rel_tol(self, rel: f64) -> Self {
        Self {
            tol: Tolerance { rel, ..self.tol },
            spectrum: SpectrumOptions {
                rel_tol: rel,
                ..self.spectrum
            },
            ..self
        }
    }
}

/// `E_r = ∫_{B(0,r)} |v|² dx`.
pub fn kinetic_energy<V: Vorticity + ?Sized>(m: &V, r: f64) -> Result<f64> {
    kinetic_energy_with(m, r, EnergyOptions::default())
}

/// `E_r = 2π ∫_0^r s A_s ds`.
///
/// The radial integral runs in `u = s^β` with `β = 2·min α` over the
/// continuous components, which absorbs the `s^{2α−1}` endpoint behaviour.
/// When a spiral is present, everything inside its second turn is integrated
/// in the winding phase instead.
pub fn kinetic_energy_with<V: Vorticity + ?Sized>(
    m: &V,
    r: f64,
    opts: EnergyOptions,
) -> Result<f64> {
    Ok(kinetic_energy_profile(m, &[r], opts)?[0])
}

/// [`kinetic_energy_with`] at each of `radii`. Radii inside the first turn of
/// a spiral share one phase-variable integral, so a profile costs little more
/// than a single energy.
pub fn kinetic_energy_profile<V: Vorticity + ?Sized>(
    m: &V,
    radii: &[f64],
    opts: EnergyOptions,
) -> Result<Vec<f64>> {
    for &r in radii {
        require(r > 0.0 && r.is_finite(), "r", r, "radius must be positive")?;
    }
    let r_max = radii.iter().fold(0.0f64, |a, &r| a.max(r));
    let comps = m.components();
    if opts.method == EnergyMethod::Auto && comps.len() == 1 {
        let closed: Option<Vec<f64>> = radii
            .iter()
            .map(|&r| closed_form_energy(comps[0].1, r))
            .collect();
        if let Some(e) = closed {
            return Ok(e);
        }
    }
    let mut beta: f64 = 2.0;
    let mut kaden = None;
    for (_, c) in &comps {
        match c {
            VorticityMeasure::Atomic(a) => {
                if a.atoms().iter().any(|at| at.position.norm() <= r_max) {
                    return Err(VortexError::Divergent(
                        "a point vortex inside the disk has infinite energy",
                    ));
                }
            }
            other => {
                let (_, alpha) = other.power_law().expect("continuous family");
                beta = beta.min(2.0 * alpha);
                if let (VorticityMeasure::Kaden(k), None) = (other, &kaden) {
                    kaden = Some(k.params());
                }
            }
        }
    }
    let direct = opts.method == EnergyMethod::Direct;
    let average = |s: f64| -> Result<f64> {
        if direct {
            spherical_average_direct(m, s)
        } else {
            spherical_average(m, s, opts.spectrum).map(|a| a.value)
        }
    };
    let Some(p) = kaden else {
        return radii
            .iter()
            .map(|&r| radial_segment(&average, 0.0, r, beta, opts.tol))
            .collect();
    };

    // With a spiral present, A_s oscillates in the winding phase φ = t s^{−1/μ}/2π,
    // so beyond the first turns the integral runs in φ, where
    // dE = 2πμ s² A_s dφ/φ and the oscillations have period 2π.
    let mu = p.mu();
    let density = |phi: f64| -> Result<f64> {
        let s = p.radius_at_phase(phi);
        Ok(2.0 * PI * mu * s * s * average(s)? / phi)
    };
    // Where another sheet crosses the circle at the same angle as the spiral,
    // A_s has a kink. A half-line does so at φ ≡ 0, a second spiral with the
    // same μ at (t'/t − 1)φ ≡ 0 (mod 2π).
    let mut kink_steps = Vec::new();
    for (_, c) in &comps {
        let ratio = match c {
            VorticityMeasure::HalfLine(_) => 0.0,
            VorticityMeasure::Kaden(q) if q.params().mu() == mu => q.params().t() / p.t(),
            _ => continue,
        };
        if ratio != 1.0 {
            kink_steps.push(2.0 * PI / (ratio - 1.0).abs());
        }
    }
    let kinks = |lo: f64, hi: f64, out: &mut Vec<f64>| {
        for &step in &kink_steps {
            let first = (lo / step).floor() as i64 + 1;
            let count = ((hi / step).ceil() as i64 - first).clamp(0, 64);
            out.extend(
                (first..first + count)
                    .map(|k| k as f64 * step)
                    .filter(|&x| x > lo && x < hi),
            );
        }
    };
    // Everything past phase `phi_split`.
    let tail = |phi_split: f64| -> Result<f64> {
        const TURNS: f64 = 2.0;
        const GL_PER_TURN: usize = 10;
        let last = phi_split + 2.0 * PI * TURNS;
        let turn_of = |phi: f64| (phi - last) / (2.0 * PI);
        // Head: whole turns, then four turns fading out with the integrated
        // cubic B-spline.
        let mut breaks: Vec<f64> = (1..=TURNS as usize + 4)
            .map(|j| phi_split + 2.0 * PI * j as f64)
            .collect();
        kinks(phi_split, last + 8.0 * PI, &mut breaks);
        let head = guarded_integral(
            |phi| Ok((1.0 - bspline_cumulative(turn_of(phi))) * density(phi)?),
            phi_split,
            last + 8.0 * PI,
            &breaks,
            opts.tol,
        )?;
        // Tail: ∫_0^∞ F(x) dx with F(x) the B-spline weighted integral over the
        // four turns starting at last + 2πx. The window's transform vanishes to
        // fourth order at every harmonic of the winding, so F is smooth in x.
        let (gx, gw) = gauss_legendre(GL_PER_TURN);
        let turn = |x: f64| -> Result<f64> {
            let a = last + 2.0 * PI * x;
            let mut nodes: Vec<f64> = (0..=4).map(|k| a + 2.0 * PI * k as f64).collect();
            kinks(a, a + 8.0 * PI, &mut nodes);
            nodes.sort_by(f64::total_cmp);
            let mut acc = 0.0;
            for w in nodes.windows(2) {
                let half = 0.5 * (w[1] - w[0]);
                for (xi, wi) in gx.iter().zip(&gw) {
                    let phi = w[0] + half * (1.0 + xi);
                    acc += wi * half * bspline((phi - a) / (2.0 * PI)) * density(phi)?;
                }
            }
            Ok(acc)
        };
        // Past PHI_FAR the spiral's imprint on A_s is far below tolerance, while
        // φ itself is too coarse to place a per-turn rule. The windows stop at
        // x_far and the remaining weight ramps in with the cumulative B-spline.
        const PHI_FAR: f64 = 1e8;
        let x_far = ((PHI_FAR - last) / (2.0 * PI)).max(0.0);
        // The window integrals decay like x^{−(βμ+1)} with algebraic corrections,
        // which are smooth in ln(1 + x).
        let windows = guarded_integral(
            |l: f64| {
                let x = l.exp();
                Ok(turn(x - 1.0)? * x)
            },
            0.0,
            x_far.ln_1p(),
            &[],
            opts.tol,
        )?;
        let far = last + 2.0 * PI * x_far;
        let ramp = guarded_integral(
            |phi| Ok(bspline_cumulative((phi - far) / (2.0 * PI)) * density(phi)?),
            far,
            far + 8.0 * PI,
            &[far + 2.0 * PI, far + 4.0 * PI, far + 6.0 * PI],
            opts.tol,
        )?;
        let mut failure = None;
        let rest = integrate_power_tail(
            |phi: f64| match density(phi) {
                Ok(v) => Complex64::new(v, 0.0),
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            },
            far + 8.0 * PI,
            beta * mu + 1.0,
            opts.tol,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(head + windows + ramp + rest.value.re)
    };

    let mut first_turn = None;
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let phi_r = p.phase(r);
        if phi_r >= 2.0 * PI {
            out.push(tail(phi_r)?);
            continue;
        }
        let shared = match first_turn {
            Some(v) => v,
            None => *first_turn.insert(tail(2.0 * PI)?),
        };
        out.push(
            shared + radial_segment(&average, p.radius_at_phase(2.0 * PI), r, beta, opts.tol)?,
        );
    }
    Ok(out)
}

/// Cardinal cubic B-spline on `[0, 4]`.
fn bspline(u: f64) -> f64 {
    match u {
        u if !(0.0..=4.0).contains(&u) => 0.0,
        u if u < 1.0 => u * u * u / 6.0,
        u if u < 2.0 => (((-3.0 * u + 12.0) * u - 12.0) * u + 4.0) / 6.0,
        u if u < 3.0 => (((3.0 * u - 24.0) * u + 60.0) * u - 44.0) / 6.0,
        u => (4.0 - u).powi(3) / 6.0,
    }
}

/// `∫_0^u` of [`bspline`].
fn bspline_cumulative(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 4.0 {
        return 1.0;
    }
    const PIECES: [f64; 4] = [1.0 / 24.0, 11.0 / 24.0, 11.0 / 24.0, 1.0 / 24.0];
    let k = u.floor() as usize;
    let whole: f64 = PIECES[..k].iter().sum();
    // Two-point Gauss is exact on a cubic piece.
    let (a, h) = (k as f64, u - k as f64);
    let g = 0.5 / 3f64.sqrt();
    whole + 0.5 * h * (bspline(a + h * (0.5 - g)) + bspline(a + h * (0.5 + g)))
}

/// `2π ∫_a^b s A_s ds` in `u = s^β`.
fn radial_segment<F>(average: &F, a: f64, b: f64, beta: f64, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv = 1.0 / beta;
    guarded_integral(
        |u| {
            if u <= 0.0 {
                return Ok(0.0);
            }
            let s = u.powf(inv);
            Ok(2.0 * PI / beta * s.powf(2.0 - beta) * average(s)?)
        },
        a.powf(beta),
        b.powf(beta),
        &[],
        tol,
    )
}

/// Real adaptive integral of a fallible integrand; the first error wins.
fn guarded_integral<F>(f: F, a: f64, b: f64, breaks: &[f64], tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut failure = None;
    let est = integrate_with_breaks(
        |x: f64| match f(x) {
            Ok(v) => Complex64::new(v, 0.0),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        a,
        b,
        breaks,
        tol,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(est.value.re),
    }
}

fn closed_form_energy(m: &VorticityMeasure, r: f64) -> Option<f64> {
    match m {
        VorticityMeasure::PowerLaw(p) => {
            Some(p.c() * p.c() / (4.0 * PI * p.alpha()) * r.powf(2.0 * p.alpha()))
        }
        VorticityMeasure::HalfLine(h) => {
            let (c, a) = (h.c(), h.alpha());
            let s = (PI * a).sin();
            Some(c * c * a * PI / (4.0 * s * s) * r.powf(2.0 * a))
        }
        _ => None,
    }
}

/// Closed-form `A_r` of a single power-law or half-line measure.
pub fn closed_form_average(m: &VorticityMeasure, r: f64) -> Option<f64> {
    match m {
        VorticityMeasure::PowerLaw(p) => {
            Some(p.c() * p.c() / (4.0 * PI * PI) * r.powf(2.0 * p.alpha() - 2.0))
        }
        VorticityMeasure::HalfLine(h) => {
            let (c, a) = (h.c(), h.alpha());
            let s = (PI * a).sin();
            Some(c * c * a * a / (4.0 * s * s) * r.powf(2.0 * a - 2.0))
        }
        _ => None,
    }
}

/// Sharp energy bounds for measures with `ω(B(0,r)) = c r^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBounds {
    pub lower: f64,
    pub upper: f64,
    pub c: f64,
    pub alpha: f64,
    pub r: f64,
}

impl EnergyBounds {
    /// Lower bound on `A_r`, attained by the radial power law.
    pub fn average_lower(&self) -> f64 {
        self.c * self.c / (4.0 * PI * PI) * self.r.powf(2.0 * self.alpha - 2.0)
    }

    /// Upper bound on `A_r`, attained by the half-line sheet.
    pub fn average_upper(&self) -> f64 {
        let s = (PI * self.alpha).sin();
        self.c * self.c * self.alpha * self.alpha / (4.0 * s * s)
            * self.r.powf(2.0 * self.alpha - 2.0)
    }

    pub fn contains(&self, energy: f64, slack: f64) -> bool {
        energy >= self.lower - slack && energy <= self.upper + slack
    }
}

pub fn power_law_bounds(c: f64, alpha: f64, r: f64) -> Result<EnergyBounds> {
    require(c > 0.0 && c.is_finite(), "c", c, "must be positive")?;
    require(
        alpha > 0.0 && alpha < 1.0,
        "alpha",
        alpha,
        "must lie in (0, 1)",
    )?;
    require(r > 0.0 && r.is_finite(), "r", r, "must be positive")?;
    let s = (PI * alpha).sin();
    Ok(EnergyBounds {
        lower: c * c / (4.0 * PI * alpha) * r.powf(2.0 * alpha),
        upper: c * c * alpha * PI / (4.0 * s * s) * r.powf(2.0 * alpha),
        c,
        alpha,
        r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{
        AtomicMeasure, HalfLineSheet, KadenMeasure, KadenParams, PowerLawRadial,
    };

    fn atom(re: f64, im: f64, mass: f64) -> VorticityMeasure {
        AtomicMeasure::from_pairs([(Complex64::new(re, im), mass)])
            .unwrap()
            .into()
    }

    #[test]
    fn profile_is_continuous_across_the_first_turn() {
        let p = KadenParams::new(0.75, 1.0).unwrap();
        let k: VorticityMeasure = KadenMeasure::from_params(p).into();
        let r0 = p.radius_at_phase(2.0 * PI);
        // One radius per branch: its own phase tail, and the shared first-turn tail.
        let e = kinetic_energy_profile(
            &k,
            &[r0 * (1.0 - 1e-9), r0 * (1.0 + 1e-9), 1.0],
            EnergyOptions::default(),
        )
        .unwrap();
        assert!((e[0] - e[1]).abs() <= 1e-8 * e[1], "{e:?}");
        assert_eq!(e[2], kinetic_energy(&k, 1.0).unwrap());
    }

    #[test]
    fn average_examples() {
        let a = spherical_average(&atom(1.0, 0.0, 1.0), 0.5, SpectrumOptions::default()).unwrap();
        assert!((a.value - 1.0 / (3.0 * PI * PI)).abs() < 1e-12);
        let p: VorticityMeasure = PowerLawRadial::new(1.0, 0.5).unwrap().into();
        let a = spherical_average(&p, 2.0, SpectrumOptions::default()).unwrap();
        assert!((a.value - 1.0 / (8.0 * PI * PI)).abs() < 1e-15);
        let h: VorticityMeasure = HalfLineSheet::new(1.0, 0.5).unwrap().into();
        let a = spherical_average(&h, 1.0, SpectrumOptions::default()).unwrap();
        assert!((a.value - 1.0 / 16.0).abs() < 1e-12, "{a:?}");
    }

    #[test]
    fn singular_radius_rejected() {
        let m = atom(0.0, 1.0, 1.0);
        assert!(matches!(
            spherical_average(&m, 1.0, SpectrumOptions::default()),
            Err(VortexError::SingularRadius { .. })
        ));
        assert!(spherical_average_direct(&m, 1.0 + 1e-7).is_err());
    }

    #[test]
    fn direct_average_examples() {
        let a = spherical_average_direct(&atom(1.0, 0.0, 1.0), 0.5).unwrap();
        assert!((a - 1.0 / (3.0 * PI * PI)).abs() < 1e-9);
        let p: VorticityMeasure = PowerLawRadial::new(1.0, 0.5).unwrap().into();
        assert!((spherical_average_direct(&p, 2.0).unwrap() - 1.0 / (8.0 * PI * PI)).abs() < 1e-12);
        let a = spherical_average_direct(&atom(0.0, 0.0, 3.0), 0.7).unwrap();
        assert!((a - 9.0 / (4.0 * PI * PI * 0.49)).abs() < 1e-10);
    }

    #[test]
    fn energy_examples() {
        let p: VorticityMeasure = PowerLawRadial::new(1.0, 0.5).unwrap().into();
        assert!((kinetic_energy(&p, 1.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let h: VorticityMeasure = HalfLineSheet::new(1.0, 0.5).unwrap().into();
        assert!((kinetic_energy(&h, 1.0).unwrap() - PI / 8.0).abs() < 1e-15);
        let e = kinetic_energy(&atom(1.0, 0.0, 1.0), 0.5).unwrap();
        assert!((e - (4.0f64 / 3.0).ln() / (4.0 * PI)).abs() < 1e-10, "{e}");
        assert!(matches!(
            kinetic_energy(&atom(0.2, 0.0, 1.0), 0.5),
            Err(VortexError::Divergent(_))
        ));
    }

    #[test]
    fn series_energy_of_extremal_measures() {
        let opts = EnergyOptions::with_method(EnergyMethod::Series);
        let p: VorticityMeasure = PowerLawRadial::new(1.0, 0.5).unwrap().into();
        assert!((kinetic_energy_with(&p, 1.0, opts).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-9);
        let h: VorticityMeasure = HalfLineSheet::new(1.0, 0.5).unwrap().into();
        assert!((kinetic_energy_with(&h, 1.0, opts).unwrap() - PI / 8.0).abs() < 1e-9);
    }

    #[test]
    fn bounds_examples() {
        let b = power_law_bounds(1.0, 0.5, 1.0).unwrap();
        assert!((b.lower - 1.0 / (2.0 * PI)).abs() < 1e-15 && (b.upper - PI / 8.0).abs() < 1e-15);
        let b = power_law_bounds(2.0, 0.5, 1.0).unwrap();
        assert!((b.lower - 2.0 / PI).abs() < 1e-15 && (b.upper - PI / 2.0).abs() < 1e-15);
        let b = power_law_bounds(1.0, 0.5, 4.0).unwrap();
        assert!((b.lower - 2.0 / PI).abs() < 1e-15);
        assert!(power_law_bounds(1.0, 1.0, 1.0).is_err());
        let near_one = power_law_bounds(1.0, 1.0 - 1e-9, 1.0).unwrap();
        assert!(near_one.upper > 1e15);
    }
}
