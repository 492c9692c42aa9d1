//! Inner and outer complex moments of vorticity and truncated moment spectra.
//!
//! Internally every moment is carried in scaled form, `m_{r,n}/r^{n+1}` and
//! `M_{r,k}·r^{k−1}`, so that the weighted squares entering the spherical
//! average are formed without under- or overflow at extreme radii.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{require, Result};
use crate::measures::{AtomicMeasure, KadenParams, Vorticity, VorticityMeasure};
use std::sync::OnceLock;

use crate::quadrature::{
    gauss_laguerre, integrate_semi_infinite, integrate_with_breaks, Tolerance,
};
use crate::special::{hurwitz_zeta, inverse_square_tail, ln_gamma};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn moment_tol() -> Tolerance {
    Tolerance::new(0.0, 1e-13).with_max_panels(4000)
}

/// `∫_{B(0,r)} uⁿ dω(u)`; linear over signed vorticities.
pub fn inner_moment<V: Vorticity + ?Sized>(m: &V, r: f64, n: usize) -> Result<Complex64> {
    require(r > 0.0, "r", r, "radius must be positive")?;
    let mut total = ZERO;
    for (sign, comp) in m.components() {
        total += scaled_inner(comp, r, n)? * sign;
    }
    Ok(total * r.powi(n as i32 + 1))
}

/// `∫_{C∖B(0,r)} u^{−k} dω(u)`; linear over signed vorticities.
pub fn outer_moment<V: Vorticity + ?Sized>(m: &V, r: f64, k: usize) -> Result<Complex64> {
    require(r > 0.0, "r", r, "radius must be positive")?;
    require(k >= 1, "k", k as f64, "outer moments start at k = 1")?;
    let mut total = ZERO;
    for (sign, comp) in m.components() {
        total += scaled_outer(comp, r, k)? * sign;
    }
    Ok(total * r.powi(1 - k as i32))
}

/// `m_{r,n} / r^{n+1}` for one measure.
pub fn scaled_inner(m: &VorticityMeasure, r: f64, n: usize) -> Result<Complex64> {
    Ok(match m {
        VorticityMeasure::PowerLaw(p) => {
            if n == 0 {
                Complex64::new(p.c() * r.powf(p.alpha() - 1.0), 0.0)
            } else {
                ZERO
            }
        }
        VorticityMeasure::HalfLine(h) => {
            let a = h.alpha();
            Complex64::new(h.c() * a / (n as f64 + a) * r.powf(a - 1.0), 0.0)
        }
        VorticityMeasure::Kaden(k) => kaden_scaled_inner(&k.params(), r, n)?,
        VorticityMeasure::Atomic(a) => atomic_scaled_inner(a, r, n),
    })
}

/// `M_{r,k} · r^{k−1}` for one measure.
pub fn scaled_outer(m: &VorticityMeasure, r: f64, k: usize) -> Result<Complex64> {
    debug_assert!(k >= 1);
    Ok(match m {
        VorticityMeasure::PowerLaw(_) => ZERO,
        VorticityMeasure::HalfLine(h) => {
            let a = h.alpha();
            Complex64::new(h.c() * a / (k as f64 - a) * r.powf(a - 1.0), 0.0)
        }
        VorticityMeasure::Kaden(km) => kaden_scaled_outer(&km.params(), r, k)?,
        VorticityMeasure::Atomic(a) => atomic_scaled_outer(a, r, k),
    })
}

fn atomic_scaled_inner(m: &AtomicMeasure, r: f64, n: usize) -> Complex64 {
    m.atoms()
        .iter()
        .filter(|a| a.position.norm() < r)
        .map(|a| (a.position / r).powi(n as i32) * a.mass)
        .sum::<Complex64>()
        / r
}

fn atomic_scaled_outer(m: &AtomicMeasure, r: f64, k: usize) -> Complex64 {
    m.atoms()
        .iter()
        .filter(|a| a.position.norm() > r)
        .map(|a| {
            // r/u as conj(u)·r/|u|²
            let ratio = a.position.conj() * (r / a.position.norm_sqr());
            ratio.powi(k as i32) * a.mass
        })
        .sum::<Complex64>()
        / r
}

/// Kaden inner moment, scaled by `r^{−(n+1)}`.
///
/// With `a = s^{−1/μ}` the moment becomes `αμ ∫_A^∞ a^{−μ(n+2)} e^{iωa} da`,
/// `A = r^{−1/μ}`, `ω = nt/2π`; the ray `a = A(1 + iu)` turns the oscillation
/// into exponential decay.
pub fn kaden_scaled_inner(p: &KadenParams, r: f64, n: usize) -> Result<Complex64> {
    let alpha = p.alpha();
    if n == 0 {
        return Ok(Complex64::new(r.powf(alpha - 1.0), 0.0));
    }
    let mu = p.mu();
    let lambda = n as f64 * p.phase(r);
    let k = laplace_power(-mu * (n as f64 + 2.0), 1.0, lambda)?;
    Ok(I * Complex64::from_polar(1.0, lambda) * k * (alpha * mu * r.powf(alpha - 1.0)))
}

fn laguerre_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_laguerre(48))
}

/// `∫_0^∞ (1 + i·dir·u)^c e^{−λu} du` for real `c` and `dir = ±1`.
///
/// Gauss-Laguerre when `λ` dominates `|c|`, adaptive quadrature otherwise.
pub fn laplace_power(c: f64, dir: f64, lambda: f64) -> Result<Complex64> {
    let f = |u: f64| {
        let log = Complex64::new(0.5 * (u * u).ln_1p(), dir * u.atan());
        (log * c).exp()
    };
    if lambda >= (2.0 * c.abs()).max(24.0) {
        let (x, w) = laguerre_rule();
        let sum: Complex64 = x.iter().zip(w).map(|(&xi, &wi)| f(xi / lambda) * wi).sum();
        return Ok(sum / lambda);
    }
    let scale = 1.0 / (lambda + c.abs().sqrt());
    Ok(integrate_semi_infinite(
        |u: f64| f(u) * (-lambda * u).exp(),
        0.0,
        scale,
        moment_tol(),
    )?
    .value)
}

/// Kaden outer moment, scaled by `r^{k−1}`.
///
/// In `a = s^{−1/μ}` it reads `αμ r^{α−k} ∫_0^1 v^q e^{−iλv} dv` with
/// `q = μ(k−2)` and `λ = kθ(r)`; see [`oscillatory_power_integral`].
pub fn kaden_scaled_outer(p: &KadenParams, r: f64, k: usize) -> Result<Complex64> {
    let alpha = p.alpha();
    let mu = p.mu();
    let q = mu * (k as f64 - 2.0);
    let lambda = k as f64 * p.phase(r);
    let j = oscillatory_power_integral(q, lambda)?;
    Ok(j * (alpha * mu * r.powf(alpha - 1.0)))
}

/// `∫_0^1 v^q e^{−iλv} dv` for `q > −1`, `λ ≥ 0`.
///
/// For large `λ` the segment is replaced by the two vertical rays from 0 and
/// from 1; the ray from 0 gives `(−i)^{q+1} Γ(q+1) λ^{−q−1}`. Otherwise the
/// segment is integrated directly, one oscillation per panel.
pub fn oscillatory_power_integral(q: f64, lambda: f64) -> Result<Complex64> {
    debug_assert!(q > -1.0 && lambda >= 0.0);
    let tol = moment_tol();
    if lambda >= (0.5 * q).max(8.0) {
        let gamma_part = Complex64::from_polar(
            (ln_gamma(q + 1.0) - (q + 1.0) * lambda.ln()).exp(),
            -0.5 * PI * (q + 1.0),
        );
        let ray = laplace_power(q, -1.0, lambda)?;
        return Ok(gamma_part + I * Complex64::from_polar(1.0, -lambda) * ray);
    }
    let periods = (lambda / (2.0 * PI)).floor() as usize;
    if q < 0.0 {
        // v = w^{1/(q+1)} removes the endpoint singularity.
        let e = 1.0 / (q + 1.0);
        let breaks: Vec<f64> = (1..=periods)
            .map(|j| (2.0 * PI * j as f64 / lambda).powf(q + 1.0))
            .collect();
        let est = integrate_with_breaks(
            |w: f64| Complex64::from_polar(1.0, -lambda * w.powf(e)),
            0.0,
            1.0,
            &breaks,
            tol,
        )?;
        Ok(est.value * e)
    } else {
        let breaks: Vec<f64> = (1..=periods)
            .map(|j| 2.0 * PI * j as f64 / lambda)
            .collect();
        let est = integrate_with_breaks(
            |v: f64| Complex64::from_polar(if v > 0.0 { v.powf(q) } else { 0.0 }, -lambda * v),
            0.0,
            1.0,
            &breaks,
            tol,
        )?;
        Ok(est.value)
    }
}

/// Truncation controls for [`moment_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumOptions {
    pub rel_tol: f64,
    pub n_max: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            n_max: 200,
        }
    }
}

impl SpectrumOptions {
    pub fn new(rel_tol: f64, n_max: usize) -> Result<Self> {
        require(
            rel_tol > 0.0 && rel_tol < 1.0,
            "rel_tol",
            rel_tol,
            "must lie in (0, 1)",
        )?;
        require(n_max >= 1, "n_max", n_max as f64, "must be positive")?;
        Ok(Self { rel_tol, n_max })
    }
}

/// Moments at radius `r` truncated at `N = inner.len() − 1 = outer.len()`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSpectrum {
    pub r: f64,
    /// `m_{r,n}` for `n = 0..=N`.
    pub inner: Vec<Complex64>,
    /// `M_{r,k}` for `k = 1..=N`.
    pub outer: Vec<Complex64>,
    /// Certified bound on `Σ_{n>N} r^{−2n−2}|m|² + Σ_{k>N} r^{2k−2}|M|²`.
    pub tail_bound: f64,
    /// Best estimate of the omitted series mass (exact for half-line sheets,
    /// fitted from the asymptotic term profile otherwise).
    pub tail_estimate: f64,
    pub converged: bool,
    /// An atom sits exactly on the circle `|u| = r`.
    pub singular: bool,
    inner_terms: Vec<f64>,
    outer_terms: Vec<f64>,
}

impl MomentSpectrum {
    pub fn truncation(&self) -> usize {
        self.outer.len()
    }

    /// `r^{−2n−2}|m_{r,n}|²`, `n = 0..=N`.
    pub fn inner_terms(&self) -> &[f64] {
        &self.inner_terms
    }

    /// `r^{2k−2}|M_{r,k}|²`, `k = 1..=N`.
    pub fn outer_terms(&self) -> &[f64] {
        &self.outer_terms
    }

    /// Sum of the retained series terms, in fixed index order.
    pub fn partial_sum(&self) -> f64 {
        partial_sum(&self.inner_terms, &self.outer_terms, self.truncation())
    }

    /// Partial sum plus the tail estimate: the series value `4π² A_r`.
    pub fn series_value(&self) -> f64 {
        self.partial_sum() + self.tail_estimate
    }
}

fn partial_sum(inner: &[f64], outer: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for j in 0..=n {
        s += inner[j];
        if j >= 1 {
            s += outer[j - 1];
        }
    }
    s
}

/// Computes moments until the certified tail bound drops below
/// `rel_tol × partial sum`, or `n_max` is reached (`converged = false`).
pub fn moment_spectrum<V: Vorticity + ?Sized>(
    m: &V,
    r: f64,
    opts: SpectrumOptions,
) -> Result<MomentSpectrum> {
    require(r > 0.0, "r", r, "radius must be positive")?;
    let comps = m.components();
    let singular = comps
        .iter()
        .any(|(_, c)| c.singular_radii().iter().any(|&s| s == r));

    // Per-component scaled moments; index 0 of `outer` is k = 1.
    let mut parts: Vec<(Vec<Complex64>, Vec<Complex64>)> = comps
        .iter()
        .map(|(_, c)| Ok((vec![scaled_inner(c, r, 0)?], Vec::new())))
        .collect::<Result<_>>()?;
    let mut inner_s: Vec<Complex64> = vec![comps
        .iter()
        .zip(&parts)
        .map(|((sign, _), p)| p.0[0] * *sign)
        .sum()];
    let mut outer_s: Vec<Complex64> = Vec::new();
    let mut n = 0;
    let mut chunk = 8usize;
    let (tail_bound, converged) = loop {
        let target = (n + chunk).min(opts.n_max);
        let new: Vec<Vec<(Complex64, Complex64)>> = (n + 1..=target)
            .into_par_iter()
            .map(|j| {
                comps
                    .iter()
                    .map(|(_, c)| Ok((scaled_inner(c, r, j)?, scaled_outer(c, r, j)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for row in new {
            let (mut a, mut b) = (ZERO, ZERO);
            for (((sign, _), part), (x, y)) in comps.iter().zip(parts.iter_mut()).zip(row) {
                part.0.push(x);
                part.1.push(y);
                a += x * *sign;
                b += y * *sign;
            }
            inner_s.push(a);
            outer_s.push(b);
        }
        n = target;
        let bound = combined_tail_bound(&comps, r, n);
        let inner_t: Vec<f64> = inner_s.iter().map(|z| z.norm_sqr()).collect();
        let outer_t: Vec<f64> = outer_s.iter().map(|z| z.norm_sqr()).collect();
        let sum = partial_sum(&inner_t, &outer_t, n);
        if bound <= opts.rel_tol * sum || (sum == 0.0 && bound == 0.0) {
            break (bound, true);
        }
        if n >= opts.n_max {
            break (bound, false);
        }
        chunk *= 2;
    };

    let inner_terms: Vec<f64> = inner_s.iter().map(|z| z.norm_sqr()).collect();
    let outer_terms: Vec<f64> = outer_s.iter().map(|z| z.norm_sqr()).collect();
    let tail_estimate = if converged {
        0.0
    } else {
        estimate_tail(&comps, &parts, r, n, tail_bound)?
    };
    let inner = inner_s
        .iter()
        .enumerate()
        .map(|(j, z)| z * r.powi(j as i32 + 1))
        .collect();
    let outer = outer_s
        .iter()
        .enumerate()
        .map(|(j, z)| z * r.powi(-(j as i32)))
        .collect();
    Ok(MomentSpectrum {
        r,
        inner,
        outer,
        tail_bound,
        tail_estimate,
        converged,
        singular,
        inner_terms,
        outer_terms,
    })
}

/// Certified tail for one component beyond index `n`.
fn component_tail_bound(m: &VorticityMeasure, r: f64, n: usize) -> f64 {
    match m {
        VorticityMeasure::PowerLaw(_) => 0.0,
        VorticityMeasure::Atomic(a) => {
            let (mut w_in, mut rho_in, mut w_out, mut rho_out) = (0.0, 0.0f64, 0.0, 0.0f64);
            for at in a.atoms() {
                let s = at.position.norm();
                if s < r {
                    w_in += at.mass;
                    rho_in = rho_in.max(s / r);
                } else if s > r {
                    w_out += at.mass;
                    rho_out = rho_out.max(r / s);
                }
            }
            let geo = |w: f64, rho: f64| {
                if w == 0.0 {
                    0.0
                } else {
                    w * w / (r * r) * rho.powi(2 * (n as i32 + 1)) / (1.0 - rho * rho)
                }
            };
            geo(w_in, rho_in) + geo(w_out, rho_out)
        }
        _ => {
            let (c, alpha) = m.power_law().expect("analytic family");
            c * c
                * alpha
                * alpha
                * r.powf(2.0 * alpha - 2.0)
                * (inverse_square_tail(n, alpha) + inverse_square_tail(n, -alpha))
        }
    }
}

fn combined_tail_bound(comps: &[(f64, &VorticityMeasure)], r: f64, n: usize) -> f64 {
    let root: f64 = comps
        .iter()
        .map(|(_, c)| component_tail_bound(c, r, n).sqrt())
        .sum();
    root * root
}

/// Estimate of the omitted series mass beyond `n`.
///
/// A lone half-line sheet (possibly minus a radial power law, whose moments
/// beyond `m_{r,0}` vanish) has an exact tail. Otherwise every component whose
/// support crosses the circle contributes moments `e^{±ijθ} g(j)` with `θ` the
/// crossing angle and `g` smooth in `j`. Each `j·g(j)` is fitted over
/// `[n/2, n]` by a cubic in `n/j`; the squared sum of the models is then
/// summed to infinity, the cross terms between crossings through
/// [`lerch_tail`]. Atomic contributions decay geometrically and are left out.
fn estimate_tail(
    comps: &[(f64, &VorticityMeasure)],
    parts: &[(Vec<Complex64>, Vec<Complex64>)],
    r: f64,
    n: usize,
    bound: f64,
) -> Result<f64> {
    let tailed: Vec<&VorticityMeasure> = comps
        .iter()
        .map(|(_, c)| *c)
        .filter(|c| !matches!(c, VorticityMeasure::PowerLaw(_)))
        .collect();
    if tailed.len() == 1 {
        if let VorticityMeasure::HalfLine(_) = tailed[0] {
            return Ok(component_tail_bound(tailed[0], r, n));
        }
    }
    if n < 16 {
        return Ok(0.0);
    }
    // (sign, crossing angle, inner model, outer model)
    let mut models: Vec<(f64, f64, [Complex64; 4], [Complex64; 4])> = Vec::new();
    for ((sign, c), (inner, outer)) in comps.iter().zip(parts) {
        let theta = match c {
            VorticityMeasure::HalfLine(_) => 0.0,
            VorticityMeasure::Kaden(k) => k.params().phase(r),
            _ => continue,
        };
        let a = fit_profile(n, |j| {
            inner[j] * Complex64::from_polar(j as f64, -(j as f64) * theta)
        });
        let b = fit_profile(n, |j| {
            outer[j - 1] * Complex64::from_polar(j as f64, j as f64 * theta)
        });
        let (Some(a), Some(b)) = (a, b) else {
            return Ok(0.0);
        };
        models.push((*sign, theta, a, b));
    }
    let nf = n as f64;
    let mut tail = 0.0;
    for (ci, (sc, tc, ac, bc)) in models.iter().enumerate() {
        for (di, (sd, td, ad, bd)) in models.iter().enumerate().skip(ci) {
            let same = ci == di;
            let weight = if same { 1.0 } else { 2.0 } * sc * sd;
            let delta = tc - td;
            let mut acc = 0.0;
            for p in 0..4 {
                for q in 0..4 {
                    let order = (p + q + 2) as u32;
                    let scale = nf.powi((p + q) as i32);
                    if same {
                        let z = hurwitz_zeta(order as f64, nf + 1.0);
                        acc += scale * z * ((ac[p] * ad[q].conj()).re + (bc[p] * bd[q].conj()).re);
                    } else {
                        let t = lerch_tail(order, delta, n)?;
                        acc += scale
                            * ((ac[p] * ad[q].conj() * t).re
                                + (bc[p] * bd[q].conj() * t.conj()).re);
                    }
                }
            }
            tail += weight * acc;
        }
    }
    Ok(if tail.is_finite() {
        tail.clamp(0.0, bound.max(0.0))
    } else {
        0.0
    })
}

/// Least-squares cubic in `x = n/j` through `y(j)` for `j ∈ [n/2, n]`.
fn fit_profile<F: Fn(usize) -> Complex64>(n: usize, y: F) -> Option<[Complex64; 4]> {
    let nf = n as f64;
    let mut ata = [[0.0f64; 4]; 4];
    let mut re = [0.0f64; 4];
    let mut im = [0.0f64; 4];
    for j in n / 2..=n {
        let x = nf / j as f64;
        let basis = [1.0, x, x * x, x * x * x];
        let v = y(j);
        for a in 0..4 {
            re[a] += basis[a] * v.re;
            im[a] += basis[a] * v.im;
            for b in 0..4 {
                ata[a][b] += basis[a] * basis[b];
            }
        }
    }
    let re = solve4(ata, re)?;
    let im = solve4(ata, im)?;
    Some(std::array::from_fn(|p| Complex64::new(re[p], im[p])))
}

/// `Σ_{j>n} e^{ijΔ} j^{−s}` for integer `s ≥ 2`.
///
/// Sums 64 terms directly, then applies Euler-Maclaurin to `e^{iΔx}x^{−s}`,
/// which converges geometrically once `Δ` is reduced to `(−π, π]`. The
/// integral part is rotated onto a vertical ray.
fn lerch_tail(s: u32, delta: f64, n: usize) -> Result<Complex64> {
    let d = delta - 2.0 * PI * (delta / (2.0 * PI)).round();
    let (d, flip) = if d < 0.0 { (-d, true) } else { (d, false) };
    let sf = s as f64;
    let m = n + 65;
    let mut head = ZERO;
    for j in n + 1..m {
        head += Complex64::from_polar((j as f64).powf(-sf), j as f64 * d);
    }
    let mf = m as f64;
    let phase = Complex64::from_polar(1.0, d * mf);
    let integral = if d == 0.0 {
        Complex64::new(mf.powf(1.0 - sf) / (sf - 1.0), 0.0)
    } else {
        I * phase * mf.powf(1.0 - sf) * laplace_power(-sf, 1.0, d * mf)?
    };
    // f^{(k)}(M) = e^{iΔM} Σ_l C(k,l) (iΔ)^{k−l} (−1)^l (s)_l M^{−s−l}
    let derivative = |k: usize| {
        let mut acc = ZERO;
        let mut binom = 1.0;
        let mut rising = 1.0;
        for l in 0..=k {
            let term = I.powu((k - l) as u32)
                * d.powi((k - l) as i32)
                * (binom * rising * mf.powf(-sf - l as f64));
            acc += if l % 2 == 0 { term } else { -term };
            binom *= (k - l) as f64 / (l + 1) as f64;
            rising *= sf + l as f64;
        }
        acc * phase
    };
    let mut em = integral + 0.5 * phase * mf.powf(-sf);
    let mut last = f64::INFINITY;
    for k in 1..=30usize {
        // B_{2k}/(2k)! = (−1)^{k+1} 2ζ(2k)/(2π)^{2k}
        let b = 2.0 * hurwitz_zeta(2.0 * k as f64, 1.0) / (2.0 * PI).powi(2 * k as i32);
        let b = if k % 2 == 1 { b } else { -b };
        let term = derivative(2 * k - 1) * b;
        let size = term.norm();
        if size > last {
            break;
        }
        em -= term;
        last = size;
        if size <= 1e-18 * em.norm() {
            break;
        }
    }
    let total = head + em;
    Ok(if flip { total.conj() } else { total })
}

fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let mut s = b[row];
        for k in row + 1..4 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}
