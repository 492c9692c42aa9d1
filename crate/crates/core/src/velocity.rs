//! Biot-Savart velocity, the angular kernel average and weak-form residuals.
//!
//! Velocities are complex numbers `v = v₁ + i v₂`; the perpendicular kernel
//! `(x−y)^⊥/|x−y|²` is `i/conj(z−u)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{require, Result, VortexError};
use crate::measures::{AtomicMeasure, HalfLineSheet, KadenMeasure, Vorticity, VorticityMeasure};
use crate::quadrature::{
    composite_rule, integrate_power_tail, integrate_semi_infinite, integrate_with_breaks, Tolerance,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy)]
pub struct VelocityOptions {
    /// Exclusion distance from the support is `delta·(1 + |z|)`.
    pub delta: f64,
    pub tol: Tolerance,
}

impl Default for VelocityOptions {
    fn default() -> Self {
        Self {
            delta: 1e-6,
            tol: Tolerance::new(1e-15, 1e-12),
        }
    }
}

pub fn velocity_at<V: Vorticity + ?Sized>(m: &V, z: Complex64) -> Result<Complex64> {
    velocity_at_with(m, z, VelocityOptions::default())
}

pub fn velocity_at_with<V: Vorticity + ?Sized>(
    m: &V,
    z: Complex64,
    opts: VelocityOptions,
) -> Result<Complex64> {
    let mut v = ZERO;
    for (sign, comp) in m.components() {
        v += measure_velocity(comp, z, opts)? * sign;
    }
    Ok(v)
}

fn proximity(z: Complex64, distance: f64, opts: &VelocityOptions) -> Result<()> {
    if distance <= opts.delta * (1.0 + z.norm()) {
        Err(VortexError::Proximity {
            re: z.re,
            im: z.im,
            distance,
        })
    } else {
        Ok(())
    }
}

fn measure_velocity(
    m: &VorticityMeasure,
    z: Complex64,
    opts: VelocityOptions,
) -> Result<Complex64> {
    match m {
        VorticityMeasure::PowerLaw(p) => {
            let r = z.norm();
            proximity(z, r, &opts)?;
            Ok(I * z * (p.c() * r.powf(p.alpha()) / (2.0 * PI * r * r)))
        }
        VorticityMeasure::Atomic(a) => atomic_velocity(a, z, &opts),
        VorticityMeasure::HalfLine(h) => half_line_velocity(h, z, &opts),
        VorticityMeasure::Kaden(k) => kaden_velocity(k, z, &opts),
    }
}

fn atomic_velocity(m: &AtomicMeasure, z: Complex64, opts: &VelocityOptions) -> Result<Complex64> {
    let mut v = ZERO;
    for a in m.atoms() {
        let d = z - a.position;
        proximity(z, d.norm(), opts)?;
        v += I / d.conj() * a.mass;
    }
    Ok(v / (2.0 * PI))
}

fn half_line_velocity(
    h: &HalfLineSheet,
    z: Complex64,
    opts: &VelocityOptions,
) -> Result<Complex64> {
    let dist = if z.re >= 0.0 { z.im.abs() } else { z.norm() };
    proximity(z, dist, opts)?;
    let (c, alpha) = (h.c(), h.alpha());
    let zb = z.conj();
    let x_cut = 2.0 * z.norm().max(1.0);
    let inv = 1.0 / alpha;
    // w = x^α on [0, x_cut]
    let breaks: Vec<f64> = if z.re > 0.0 {
        vec![z.re.powf(alpha)]
    } else {
        vec![]
    };
    let head = integrate_with_breaks(
        |w: f64| I / (zb - w.powf(inv)) * c,
        0.0,
        x_cut.powf(alpha),
        &breaks,
        opts.tol,
    )?;
    let tail = integrate_power_tail(
        |x: f64| I / (zb - x) * (c * alpha * x.powf(alpha - 1.0)),
        x_cut,
        2.0 - alpha,
        opts.tol,
    )?;
    Ok((head.value + tail.value) / (2.0 * PI))
}

/// Distance from `z` to the spiral, estimated from the crossing point on
/// `|u| = |z|` and the spiral points on the ray through `z`.
pub(crate) fn kaden_distance(k: &KadenMeasure, z: Complex64) -> f64 {
    let p = k.params();
    let r = z.norm();
    if r == 0.0 {
        return 0.0;
    }
    let mut best = (z - k.point(r)).norm();
    let arg = z.arg().rem_euclid(2.0 * PI);
    let j0 = ((p.phase(r) - arg) / (2.0 * PI)).round();
    for dj in -1..=1 {
        let angle = arg + 2.0 * PI * (j0 + dj as f64);
        if angle > 0.0 {
            let s = p.radius_at_phase(angle);
            best = best.min((r - s).abs());
        }
    }
    best
}

/// Spiral velocity split at `s0 = |z|/2`.
///
/// The outer part `s ≥ s0` is integrated along the curve with one panel per
/// winding and an algebraic tail. On the inner part the kernel is expanded
/// as `i/z̄ + iū/(z̄(z̄−ū))`; the first term integrates to `i s0^α/z̄`, and the
/// second is moved, in `a = s^{−1/μ}`, onto the ray `a = a0 − iy` where the
/// spiral factor decays like `exp(−ty/2π)`.
fn kaden_velocity(k: &KadenMeasure, z: Complex64, opts: &VelocityOptions) -> Result<Complex64> {
    proximity(z, kaden_distance(k, z), opts)?;
    let p = k.params();
    let (mu, alpha) = (p.mu(), p.alpha());
    let kappa = p.t() / (2.0 * PI);
    let r = z.norm();
    let zb = z.conj();
    let s0 = 0.5 * r;

    let kernel = |s: f64| I / (zb - k.point(s).conj()) * (alpha * s.powf(alpha - 1.0));
    let s_far = (2.0 * r).max(p.radius_at_phase(2.0 * PI));
    let windings = (p.phase(s0) / (2.0 * PI)).floor() as usize;
    let mut breaks: Vec<f64> = (1..=windings)
        .map(|j| p.radius_at_phase(2.0 * PI * j as f64))
        .filter(|&s| s > s0 && s < s_far)
        .collect();
    breaks.push(r);
    let arg = z.arg().rem_euclid(2.0 * PI);
    let j0 = ((p.phase(r) - arg) / (2.0 * PI)).round();
    for dj in -1..=1 {
        let angle = arg + 2.0 * PI * (j0 + dj as f64);
        if angle > 0.0 {
            breaks.push(p.radius_at_phase(angle));
        }
    }
    let tol = opts
        .tol
        .with_max_panels(opts.tol.max_panels + 4 * breaks.len());
    let outer = integrate_with_breaks(kernel, s0, s_far, &breaks, tol)?.value
        + integrate_power_tail(kernel, s_far, 2.0 - alpha, opts.tol)?.value;

    let a0 = s0.powf(-1.0 / mu);
    let phase0 = Complex64::from_polar(1.0, -kappa * a0);
    let ray = |y: f64| {
        let a = Complex64::new(a0, -y);
        let ln_a = a.ln();
        let g = (-ln_a * mu).exp() * phase0 * (-kappa * y).exp();
        (-ln_a * (2.0 * mu)).exp() * g / (zb * (zb - g))
    };
    let scale = 1.0 / (kappa + 1.0 / a0);
    let inner = I * s0.powf(alpha) / zb
        + integrate_semi_infinite(ray, 0.0, scale, opts.tol)?.value * (alpha * mu);
    Ok((outer + inner) / (2.0 * PI))
}

/// Closed form of `(2π)^{−1} ∫ dθ / ((u − re^{iθ})(v − re^{−iθ}))`.
pub fn kernel_pair_average(u: Complex64, v: Complex64, r: f64) -> Result<Complex64> {
    require(r > 0.0, "r", r, "radius must be positive")?;
    let (du, dv) = (u.norm() - r, v.norm() - r);
    if du == 0.0 || dv == 0.0 {
        return Err(VortexError::SingularConfiguration(
            "a point lies on the circle |z| = r",
        ));
    }
    Ok(if du > 0.0 && dv > 0.0 {
        (u * v - r * r).inv()
    } else if du < 0.0 && dv < 0.0 {
        (r * r - u * v).inv()
    } else {
        ZERO
    })
}

/// The same angular average by adaptive quadrature.
pub fn kernel_pair_average_numeric(u: Complex64, v: Complex64, r: f64) -> Result<Complex64> {
    require(r > 0.0, "r", r, "radius must be positive")?;
    let opts = VelocityOptions::default();
    for w in [u, v] {
        let gap = (w.norm() - r).abs();
        proximity(w, gap, &opts)?;
    }
    let breaks = [
        u.arg().rem_euclid(2.0 * PI),
        (-v.arg()).rem_euclid(2.0 * PI),
    ];
    let est = integrate_with_breaks(
        |th: f64| {
            let e = Complex64::from_polar(r, th);
            ((u - e) * (v - e.conj())).inv()
        },
        0.0,
        2.0 * PI,
        &breaks,
        Tolerance::new(1e-14, 1e-12),
    )?;
    Ok(est.value / (2.0 * PI))
}

/// `φ(x) = (1 − |x−center|²/radius²)^degree` inside the disk, 0 outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestBump {
    pub center: Complex64,
    pub radius: f64,
    pub degree: u32,
}

impl TestBump {
    pub fn new(center: Complex64, radius: f64, degree: u32) -> Result<Self> {
        require(
            radius > 0.0 && radius.is_finite(),
            "radius",
            radius,
            "must be positive",
        )?;
        require(degree >= 2, "degree", degree as f64, "must be at least 2")?;
        Ok(Self {
            center,
            radius,
            degree,
        })
    }

    pub fn value(&self, x: Complex64) -> f64 {
        let q = 1.0 - (x - self.center).norm_sqr() / (self.radius * self.radius);
        if q <= 0.0 {
            0.0
        } else {
            q.powi(self.degree as i32)
        }
    }

    pub fn gradient(&self, x: Complex64) -> Complex64 {
        let r2 = self.radius * self.radius;
        let q = 1.0 - (x - self.center).norm_sqr() / r2;
        if q <= 0.0 {
            ZERO
        } else {
            (x - self.center) * (-2.0 * self.degree as f64 / r2 * q.powi(self.degree as i32 - 1))
        }
    }
}

/// Resolution of the polar tensor rule used by [`weak_identity_residuals`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakGrid {
    pub radial_panels: usize,
    pub angular_panels: usize,
    pub order: usize,
    /// Continuous families: the disk `|x| < inner_cutoff·radius` is left out.
    /// Its contribution is of order `inner_cutoff^{α+2}`.
    pub inner_cutoff: f64,
}

impl Default for WeakGrid {
    fn default() -> Self {
        Self {
            radial_panels: 12,
            angular_panels: 12,
            order: 8,
            inner_cutoff: 2e-3,
        }
    }
}

impl WeakGrid {
    pub fn refined(&self) -> Self {
        Self {
            radial_panels: self.radial_panels * 2,
            angular_panels: self.angular_panels * 2,
            inner_cutoff: self.inner_cutoff / 2.0,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakResiduals {
    /// `|∫ ∇φ·v dx|`
    pub div_residual: f64,
    /// `|∫ ⊥∇φ·v dx + ∫ φ dω|`
    pub curl_residual: f64,
    pub curl_integral: f64,
    pub phi_integral: f64,
}

/// Divergence and curl residuals of the weak Biot-Savart identities for one
/// test bump.
///
/// Continuous families need the bump centered at the origin, where polar
/// panels can follow the support crossing on every circle. Atomic measures
/// accept any center: each atom's field is integrated in polar coordinates
/// around the atom, which cancels its kernel singularity.
pub fn weak_identity_residuals(
    m: &VorticityMeasure,
    phi: &TestBump,
    grid: WeakGrid,
) -> Result<WeakResiduals> {
    require(
        grid.radial_panels >= 1 && grid.angular_panels >= 1,
        "grid",
        0.0,
        "panel counts must be positive",
    )?;
    require(
        grid.order >= 2,
        "order",
        grid.order as f64,
        "must be at least 2",
    )?;
    let (flux, circ, phi_int) = match m {
        VorticityMeasure::Atomic(a) => atomic_weak(a, phi, grid)?,
        _ => {
            if phi.center != ZERO {
                return Err(VortexError::Unsupported(
                    "weak residuals for continuous families need a bump centered at the origin",
                ));
            }
            let rho_min = grid.inner_cutoff * phi.radius;
            require(
                rho_min > 0.0 && rho_min < phi.radius,
                "inner_cutoff",
                grid.inner_cutoff,
                "must lie in (0, 1)",
            )?;
            let ratio = (phi.radius / rho_min).powf(1.0 / grid.radial_panels as f64);
            let mut edges: Vec<f64> = (0..grid.radial_panels)
                .map(|i| rho_min * ratio.powi(i as i32))
                .collect();
            edges.push(phi.radius);
            let radial = composite_rule(&edges, grid.order);
            let crossing = |rho: f64| match m {
                VorticityMeasure::Kaden(k) => k.params().phase(rho).rem_euclid(2.0 * PI),
                _ => 0.0,
            };
            let angular = |rho: f64| -> Vec<(f64, f64)> {
                let start = crossing(rho);
                let edges: Vec<f64> = (0..=grid.angular_panels)
                    .map(|j| start + 2.0 * PI * j as f64 / grid.angular_panels as f64)
                    .collect();
                composite_rule(&edges, grid.order)
            };
            // Tightly wound turns pass within ~1e−9 of nodes next to the
            // crossing angle; the velocity there is bounded and resolvable.
            let near = VelocityOptions {
                delta: 1e-14,
                tol: Tolerance::new(1e-12, 1e-8).with_max_panels(8000),
            };
            let rings: Vec<(f64, f64)> = radial
                .par_iter()
                .map(|&(rho, wr)| -> Result<(f64, f64)> {
                    let mut f = 0.0;
                    let mut c = 0.0;
                    for (th, wt) in angular(rho) {
                        let x = Complex64::from_polar(rho, th);
                        let v = velocity_at_with(m, x, near)?;
                        let g = phi.gradient(x);
                        f += wt * dot(g, v);
                        c += wt * dot(I * g, v);
                    }
                    Ok((wr * rho * f, wr * rho * c))
                })
                .collect::<Result<_>>()?;
            let flux: f64 = rings.iter().map(|r| r.0).sum();
            let circ: f64 = rings.iter().map(|r| r.1).sum();
            let phi_int = m
                .integrate(|u| Complex64::new(phi.value(u), 0.0), 0.0, phi.radius)?
                .re;
            (flux, circ, phi_int)
        }
    };
    Ok(WeakResiduals {
        div_residual: flux.abs(),
        curl_residual: (circ + phi_int).abs(),
        curl_integral: circ,
        phi_integral: phi_int,
    })
}

fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

fn atomic_weak(m: &AtomicMeasure, phi: &TestBump, grid: WeakGrid) -> Result<(f64, f64, f64)> {
    let big_r = phi.radius;
    let th_edges: Vec<f64> = (0..=grid.angular_panels)
        .map(|j| 2.0 * PI * j as f64 / grid.angular_panels as f64)
        .collect();
    let angular = composite_rule(&th_edges, grid.order);
    let unit: Vec<f64> = (0..=grid.radial_panels)
        .map(|i| i as f64 / grid.radial_panels as f64)
        .collect();
    let radial_unit = composite_rule(&unit, grid.order);

    let parts: Vec<(f64, f64)> = m
        .atoms()
        .par_iter()
        .map(|atom| -> Result<(f64, f64)> {
            let single = |x: Complex64| -> Result<Complex64> {
                let d = x - atom.position;
                if d.norm() == 0.0 {
                    return Err(VortexError::Proximity {
                        re: x.re,
                        im: x.im,
                        distance: 0.0,
                    });
                }
                Ok(I / d.conj() * (atom.mass / (2.0 * PI)))
            };
            let d = atom.position - phi.center;
            let inside = d.norm() < big_r;
            let origin = if inside { atom.position } else { phi.center };
            let (mut f, mut c) = (0.0, 0.0);
            for &(th, wt) in &angular {
                let e = Complex64::from_polar(1.0, th);
                let reach = if inside {
                    let b = dot(d, e);
                    -b + (b * b + big_r * big_r - d.norm_sqr()).sqrt()
                } else {
                    big_r
                };
                for &(xi, wi) in &radial_unit {
                    let rho = xi * reach;
                    let x = origin + e * rho;
                    let v = single(x)?;
                    let g = phi.gradient(x);
                    let w = wt * wi * reach * rho;
                    f += w * dot(g, v);
                    c += w * dot(I * g, v);
                }
            }
            Ok((f, c))
        })
        .collect::<Result<_>>()?;
    let flux = parts.iter().map(|p| p.0).sum();
    let circ = parts.iter().map(|p| p.1).sum();
    let phi_int = m
        .atoms()
        .iter()
        .map(|a| a.mass * phi.value(a.position))
        .sum();
    Ok((flux, circ, phi_int))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{PowerLawRadial, SignedVorticity};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn point_vortex_examples() {
        let a: VorticityMeasure = AtomicMeasure::from_pairs([(ZERO, 1.0)]).unwrap().into();
        let v = velocity_at(&a, c(1.0, 0.0)).unwrap();
        assert!((v - c(0.0, 1.0 / (2.0 * PI))).norm() < 1e-15);
        let b: VorticityMeasure = AtomicMeasure::from_pairs([(c(1.0, 0.0), 1.0)])
            .unwrap()
            .into();
        let v = velocity_at(&b, c(2.0, 0.0)).unwrap();
        assert!((v - c(0.0, 1.0 / (2.0 * PI))).norm() < 1e-15);
        assert!(matches!(
            velocity_at(&b, c(1.0, 1e-9)),
            Err(VortexError::Proximity { .. })
        ));
    }

    #[test]
    fn power_law_velocity_is_tangential() {
        let p: VorticityMeasure = PowerLawRadial::new(1.0, 0.5).unwrap().into();
        let v = velocity_at(&p, c(1.0, 0.0)).unwrap();
        assert!((v - c(0.0, 1.0 / (2.0 * PI))).norm() < 1e-15);
        let z = c(-0.3, 0.4);
        let v = velocity_at(&p, z).unwrap();
        assert!(dot(v, z).abs() < 1e-15);
    }

    #[test]
    fn kernel_average_cases() {
        assert!(
            (kernel_pair_average(c(2.0, 0.0), c(3.0, 0.0), 1.0).unwrap() - c(0.2, 0.0)).norm()
                < 1e-15
        );
        assert_eq!(
            kernel_pair_average(c(0.5, 0.0), c(2.0, 0.0), 1.0).unwrap(),
            ZERO
        );
        assert_eq!(kernel_pair_average(ZERO, ZERO, 1.0).unwrap(), c(1.0, 0.0));
        assert!(kernel_pair_average(c(0.0, 1.0), ZERO, 1.0).is_err());
        let n = kernel_pair_average_numeric(c(2.0, 0.0), c(3.0, 0.0), 1.0).unwrap();
        assert!((n - c(0.2, 0.0)).norm() < 1e-10);
        let n = kernel_pair_average_numeric(c(3.0, 0.0), c(3.0, 0.0), 1.0).unwrap();
        assert!((n - c(0.125, 0.0)).norm() < 1e-10);
        let n = kernel_pair_average_numeric(ZERO, ZERO, 2.0).unwrap();
        assert!((n - c(0.25, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn half_line_velocity_matches_closed_form() {
        // For α = 1/2, ∫_0^∞ x^{−1/2}/(w − x) dx = −π/√(−w) off the cut.
        let h: VorticityMeasure = HalfLineSheet::new(1.0, 0.5).unwrap().into();
        for z in [c(0.3, 0.7), c(-1.2, 0.1), c(2.0, -0.5)] {
            let w = z.conj();
            let exact = I * (-PI / (-w).sqrt()) * 0.5 / (2.0 * PI);
            let v = velocity_at(&h, z).unwrap();
            assert!(
                (v - exact).norm() < 1e-11 * exact.norm(),
                "{z}: {v} vs {exact}"
            );
        }
    }

    #[test]
    fn kaden_velocity_far_field_and_circulation() {
        let k: VorticityMeasure = KadenMeasure::new(0.75, 2.0).unwrap().into();
        // circulation along |z| = 0.7 equals the enclosed mass
        let r = 0.7;
        let start = match &k {
            VorticityMeasure::Kaden(m) => m.params().phase(r),
            _ => unreachable!(),
        };
        let est = integrate_with_breaks(
            |th: f64| {
                let z = Complex64::from_polar(r, th);
                let v = velocity_at(&k, z).unwrap();
                Complex64::new(dot(v, I * z), 0.0)
            },
            start,
            start + 2.0 * PI,
            &[],
            Tolerance::new(1e-12, 1e-10),
        )
        .unwrap();
        assert!(
            (est.value.re - r.powf(2.0 / 3.0)).abs() < 1e-8,
            "{}",
            est.value.re
        );
    }

    #[test]
    fn signed_velocity_is_difference() {
        let k = KadenMeasure::new(0.6, 1.0).unwrap();
        let p = PowerLawRadial::new(1.0, k.alpha()).unwrap();
        let s = SignedVorticity::new(k, p);
        let z = c(0.4, -0.9);
        let d = velocity_at(&s, z).unwrap()
            - (velocity_at(&VorticityMeasure::from(k), z).unwrap()
                - velocity_at(&VorticityMeasure::from(p), z).unwrap());
        assert!(d.norm() < 1e-12);
    }

    #[test]
    fn bump_gradient_matches_difference_quotient() {
        let b = TestBump::new(c(0.2, -0.1), 1.5, 3).unwrap();
        let x = c(0.5, 0.4);
        let h = 1e-6;
        let gx = (b.value(x + h) - b.value(x - h)) / (2.0 * h);
        let gy = (b.value(x + I * h) - b.value(x - I * h)) / (2.0 * h);
        assert!((b.gradient(x) - c(gx, gy)).norm() < 1e-8);
        assert!(TestBump::new(ZERO, 1.0, 1).is_err());
    }

    #[test]
    fn point_vortex_weak_identity() {
        let a: VorticityMeasure = AtomicMeasure::from_pairs([(ZERO, 1.0)]).unwrap().into();
        let b = TestBump::new(ZERO, 1.0, 3).unwrap();
        let res = weak_identity_residuals(&a, &b, WeakGrid::default()).unwrap();
        assert!(
            res.curl_residual < 1e-12 && res.div_residual < 1e-12,
            "{res:?}"
        );
        assert!((res.phi_integral - 1.0).abs() < 1e-15);
    }
}
