//! Kaden spiral geometry and time-evolution diagnostics: the similarity
//! ansatz residuals, arclength growth, energy evolution with distances to the
//! two limiting sheets, rate fits, the scaling law and continuity in time.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::energy::{
    kinetic_energy_profile, kinetic_energy_with, spherical_average, EnergyOptions,
};
use crate::error::{require, Result, VortexError};
use crate::measures::{
    HalfLineSheet, KadenMeasure, KadenParams, PowerLawRadial, SignedVorticity, VorticityMeasure,
};
use crate::moments::{inner_moment, outer_moment, SpectrumOptions};
use crate::quadrature::{integrate_real, Tolerance};

/// `s·exp(i(t/2π)s^{−1/μ})`; the centre for `s ≤ 0`.
pub fn spiral_point(s: f64, params: &KadenParams) -> Complex64 {
    if s <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(s, params.phase(s))
}

/// Residuals of the two similarity equations for a profile `(r, θ)` given by
/// its values at `γ`.
///
/// With `Z = r e^{2πiθ}` the pair is the radial and tangential part of
/// `(1−2μ)γZ′ + μZ = iγ/r·e^{2πiθ}`; each is divided by the size of its
/// terms and rotated back onto `Z`.
pub fn similarity_equations(
    gamma: f64,
    mu: f64,
    r: f64,
    dr: f64,
    theta: f64,
    dtheta: f64,
) -> (Complex64, Complex64) {
    let k = 1.0 - 2.0 * mu;
    let (a, b) = (k * gamma * dr, mu * r);
    let radial = (a + b) / (a.abs() + b.abs()).max(f64::MIN_POSITIVE);
    let (c, d) = (k * gamma * r * dtheta, gamma / (2.0 * PI * r));
    let tangential = (c - d) / (c.abs() + d.abs()).max(f64::MIN_POSITIVE);
    let frame = Complex64::from_polar(1.0, 2.0 * PI * theta);
    (frame * radial, frame * Complex64::new(0.0, tangential))
}

/// [`similarity_equations`] at the closed-form profile `r = γ^{μ/(2μ−1)}`,
/// `θ = γ^{1/(1−2μ)}/2π`.
pub fn similarity_residual(gamma: f64, mu: f64) -> Result<(Complex64, Complex64)> {
    require(
        gamma > 0.0 && gamma.is_finite(),
        "gamma",
        gamma,
        "must be positive",
    )?;
    require(mu > 0.5 && mu < 1.0, "mu", mu, "must lie in (1/2, 1)")?;
    let p = mu / (2.0 * mu - 1.0);
    let q = 1.0 / (1.0 - 2.0 * mu);
    let r = gamma.powf(p);
    let theta = gamma.powf(q) / (2.0 * PI);
    Ok(similarity_equations(
        gamma,
        mu,
        r,
        p * r / gamma,
        theta,
        q * theta / gamma,
    ))
}

/// Length of the spiral between the radii `eps` and `r`.
///
/// The integrand `√(1 + (s·dφ/ds)²)` is integrated in `ln s`.
pub fn arclength(eps: f64, r: f64, params: &KadenParams) -> Result<f64> {
    require(eps > 0.0, "eps", eps, "must be positive")?;
    require(r > eps && r.is_finite(), "r", r, "must exceed eps")?;
    let k = params.t() / (2.0 * PI * params.mu());
    let inv = 1.0 / params.mu();
    integrate_real(
        |v: f64| {
            let s = v.exp();
            s * (k * s.powf(-inv)).hypot(1.0)
        },
        eps.ln(),
        r.ln(),
        &[],
        Tolerance::new(0.0, 1e-12),
    )
}

/// Log-log slope of the arclength growth as `eps → 0`.
///
/// Fits the increments `L(ε_{k+1}) − L(ε_k)` over a geometric `eps_list`,
/// which removes the finite outer part of the length.
pub fn arclength_slope(params: &KadenParams, eps_list: &[f64]) -> Result<f64> {
    if eps_list.len() < 3 {
        return Err(VortexError::InsufficientSamples {
            needed: 3,
            got: eps_list.len(),
        });
    }
    for w in eps_list.windows(2) {
        require(w[1] < w[0], "eps", w[1], "eps_list must decrease")?;
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for w in eps_list.windows(2) {
        let piece = arclength(w[1], w[0], params)?;
        xs.push(w[0].ln());
        ys.push(piece.ln());
    }
    Ok(least_squares_slope(&xs, &ys))
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// One time sample of [`energy_evolution`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionSample {
    pub t: f64,
    pub a_r: f64,
    pub e_r: f64,
    /// `∫_{B(0,r)} |v_t − v_0|²` with `v_0` the half-line limit.
    pub dist_to_w0_sq: f64,
    /// `∫_{B(0,r)} |v_t − v_∞|²` with `v_∞` the radial limit.
    pub dist_to_winf_sq: f64,
    /// Circle average `A_r(ω_t − ω_0)`.
    pub a_dist_to_w0: f64,
    /// Circle average `A_r(ω_t − ω_∞)`.
    pub a_dist_to_winf: f64,
    /// Set when any quantity failed; the numeric fields are then NaN.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionSeries {
    pub mu: f64,
    pub r: f64,
    pub samples: Vec<EvolutionSample>,
}

/// `25` points per decade on `[10^{-3}, 10^3]`.
pub fn default_t_grid() -> Vec<f64> {
    (0..=150)
        .map(|k| 10f64.powf(-3.0 + k as f64 / 25.0))
        .collect()
}

fn limits(mu: f64) -> Result<(VorticityMeasure, VorticityMeasure)> {
    let alpha = 2.0 - 1.0 / mu;
    Ok((
        HalfLineSheet::new(1.0, alpha)?.into(),
        PowerLawRadial::new(1.0, alpha)?.into(),
    ))
}

fn evolution_sample(
    mu: f64,
    r: f64,
    t: f64,
    limits: (&VorticityMeasure, &VorticityMeasure),
    opts: EnergyOptions,
) -> Result<EvolutionSample> {
    let (limit0, limit_inf) = limits;
    let k = KadenMeasure::new(mu, t)?;
    let kv: VorticityMeasure = k.into();
    let spec = SpectrumOptions {
        rel_tol: opts.spectrum.rel_tol,
        ..SpectrumOptions::default()
    };
    let a_r = spherical_average(&kv, r, spec)?.value;
    let e_r = kinetic_energy_with(&kv, r, opts)?;
    let e0 = kinetic_energy_with(limit0, r, opts)?;
    let einf = kinetic_energy_with(limit_inf, r, opts)?;
    let d0 = SignedVorticity::new(k, limit0.clone());
    let dinf = SignedVorticity::new(k, limit_inf.clone());
    Ok(EvolutionSample {
        t,
        a_r,
        e_r,
        dist_to_w0_sq: kinetic_energy_with(&d0, r, opts.with_abs_floor(e_r + e0))?,
        dist_to_winf_sq: kinetic_energy_with(&dinf, r, opts.with_abs_floor(e_r + einf))?,
        a_dist_to_w0: spherical_average(&d0, r, spec)?.value,
        a_dist_to_winf: spherical_average(&dinf, r, spec)?.value,
        error: None,
    })
}

/// `A_r`, `E_r` and the squared velocity distances to the `t → 0` and
/// `t → ∞` limits along `t_grid`. Failures are recorded per sample.
pub fn energy_evolution(mu: f64, r: f64, t_grid: &[f64]) -> Result<EvolutionSeries> {
    energy_evolution_with(mu, r, t_grid, EnergyOptions::default())
}

pub fn energy_evolution_with(
    mu: f64,
    r: f64,
    t_grid: &[f64],
    opts: EnergyOptions,
) -> Result<EvolutionSeries> {
    KadenParams::new(mu, 1.0)?;
    require(r > 0.0 && r.is_finite(), "r", r, "radius must be positive")?;
    if t_grid.is_empty() {
        return Err(VortexError::InsufficientSamples { needed: 1, got: 0 });
    }
    require(t_grid[0] > 0.0, "t", t_grid[0], "times must be positive")?;
    for w in t_grid.windows(2) {
        require(w[1] > w[0], "t", w[1], "t_grid must increase strictly")?;
    }
    let (limit0, limit_inf) = limits(mu)?;
    let samples = t_grid
        .par_iter()
        .map(|&t| {
            evolution_sample(mu, r, t, (&limit0, &limit_inf), opts).unwrap_or_else(|e| {
                EvolutionSample {
                    t,
                    a_r: f64::NAN,
                    e_r: f64::NAN,
                    dist_to_w0_sq: f64::NAN,
                    dist_to_winf_sq: f64::NAN,
                    a_dist_to_w0: f64::NAN,
                    a_dist_to_winf: f64::NAN,
                    error: Some(e.to_string()),
                }
            })
        })
        .collect();
    Ok(EvolutionSeries { mu, r, samples })
}

/// Which end of the evolution a rate is fitted at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tail {
    /// `t ≥ 10`, circle average of `ω_t − ω_∞`.
    Infinity,
    /// `t ≤ 0.1`, energy distance to `ω_0`.
    Zero,
}

impl FromStr for Tail {
    type Err = VortexError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "infinity-tail" | "infinity" => Ok(Tail::Infinity),
            "zero-tail" | "zero" => Ok(Tail::Zero),
            _ => Err(VortexError::Parse {
                position: 0,
                token: s.to_string(),
                message: "expected `infinity-tail` or `zero-tail`".into(),
            }),
        }
    }
}

/// Least-squares slope of `log(distance)` against `log t` in the requested
/// asymptotic regime; needs at least four usable samples.
pub fn rate_fit(series: &EvolutionSeries, which: Tail) -> Result<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = series
        .samples
        .iter()
        .filter(|s| s.error.is_none())
        .filter_map(|s| {
            let value = match which {
                Tail::Infinity if s.t >= 10.0 => s.a_dist_to_winf,
                Tail::Zero if s.t <= 0.1 => s.dist_to_w0_sq,
                _ => return None,
            };
            (value > 0.0).then(|| (s.t.ln(), value.ln()))
        })
        .unzip();
    if xs.len() < 4 {
        return Err(VortexError::InsufficientSamples {
            needed: 4,
            got: xs.len(),
        });
    }
    Ok(least_squares_slope(&xs, &ys))
}

/// `|E_r(ω_t) − t^{4μ−2} E_{t^{−μ}r}(ω_1)| / E_r(ω_t)`.
pub fn scaling_residual(mu: f64, r: f64, t: f64) -> Result<f64> {
    Ok(scaling_residuals(mu, &[r], &[t])?[0][0])
}

/// [`scaling_residual`] over a grid, indexed `[time][radius]`. The energies
/// of each measure are taken as one profile.
pub fn scaling_residuals(mu: f64, radii: &[f64], times: &[f64]) -> Result<Vec<Vec<f64>>> {
    for &r in radii {
        require(r > 0.0 && r.is_finite(), "r", r, "radius must be positive")?;
    }
    let opts = EnergyOptions::default();
    let moving: Vec<f64> = times
        .iter()
        .filter(|&&t| t != 1.0)
        .flat_map(|&t| radii.iter().map(move |&r| t.powf(-mu) * r))
        .collect();
    let unit: VorticityMeasure = KadenMeasure::new(mu, 1.0)?.into();
    let mut rhs = kinetic_energy_profile(&unit, &moving, opts)?.into_iter();
    times
        .iter()
        .map(|&t| {
            let direct: VorticityMeasure = KadenMeasure::new(mu, t)?.into();
            if t == 1.0 {
                return Ok(vec![0.0; radii.len()]);
            }
            let lhs = kinetic_energy_profile(&direct, radii, opts)?;
            Ok(lhs
                .into_iter()
                .map(|l| {
                    let r = t.powf(4.0 * mu - 2.0)
                        * rhs.next().expect("one unit energy per grid point");
                    (l - r).abs() / l
                })
                .collect())
        })
        .collect()
}

/// One entry of [`continuity_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuitySample {
    pub dt: f64,
    /// `∫_{B(0,r)} |v(t0 + dt) − v(t0)|²`.
    pub dist_sq: f64,
    /// `|E_r(ω_{t0+dt}) − E_r(ω_{t0})|`.
    pub energy_gap: f64,
}

/// Velocity distance between `ω_{t0+dt}` and `ω_{t0}` for each `dt`.
pub fn continuity_check(
    mu: f64,
    r: f64,
    t0: f64,
    dt_list: &[f64],
) -> Result<Vec<ContinuitySample>> {
    let base = KadenMeasure::new(mu, t0)?;
    require(r > 0.0 && r.is_finite(), "r", r, "radius must be positive")?;
    let widest = dt_list.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    require(
        t0 - widest > 0.0,
        "dt",
        widest,
        "t0 − dt must stay positive",
    )?;
    let base_v: VorticityMeasure = base.into();
    let e0 = kinetic_energy_with(&base_v, r, EnergyOptions::default())?;
    dt_list
        .iter()
        .map(|&dt| {
            if dt == 0.0 {
                return Ok(ContinuitySample {
                    dt,
                    dist_sq: 0.0,
                    energy_gap: 0.0,
                });
            }
            let moved = KadenMeasure::new(mu, t0 + dt)?;
            let e1 =
                kinetic_energy_with(&VorticityMeasure::from(moved), r, EnergyOptions::default())?;
            let diff = SignedVorticity::new(moved, base);
            Ok(ContinuitySample {
                dt,
                dist_sq: kinetic_energy_with(
                    &diff,
                    r,
                    EnergyOptions::default().with_abs_floor(e0 + e1),
                )?,
                energy_gap: (e1 - e0).abs(),
            })
        })
        .collect()
}

/// Inner (`m_{r,n}`) or outer (`M_{r,k}`) moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MomentKind {
    Inner,
    Outer,
}

impl FromStr for MomentKind {
    type Err = VortexError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inner" => Ok(MomentKind::Inner),
            "outer" => Ok(MomentKind::Outer),
            _ => Err(VortexError::Parse {
                position: 0,
                token: s.to_string(),
                message: "expected `inner` or `outer`".into(),
            }),
        }
    }
}

/// Moments normalised by their expected decay in `t`:
/// `|m_{r,n}|·t/r^{n+2}`, `|M_{r,1}|·t^{1−μ}`, `|M_{r,2}|·t` and
/// `|M_{r,k}|·t·k/r^{2−k}` for `k ≥ 3`. Bounded sequences confirm the rates.
pub fn moment_decay_check(
    mu: f64,
    r: f64,
    index: usize,
    kind: MomentKind,
    t_list: &[f64],
) -> Result<Vec<f64>> {
    KadenParams::new(mu, 1.0)?;
    require(r > 0.0 && r.is_finite(), "r", r, "radius must be positive")?;
    require(
        index >= 1,
        "n",
        index as f64,
        "moment index must be at least 1",
    )?;
    for &t in t_list {
        require(t > 1.0, "t", t, "times must exceed 1")?;
    }
    for w in t_list.windows(2) {
        require(w[1] > w[0], "t", w[1], "t_list must increase strictly")?;
    }
    let nf = index as f64;
    t_list
        .iter()
        .map(|&t| {
            let k: VorticityMeasure = KadenMeasure::new(mu, t)?.into();
            Ok(match kind {
                MomentKind::Inner => inner_moment(&k, r, index)?.norm() * t / r.powf(nf + 2.0),
                MomentKind::Outer => {
                    let m = outer_moment(&k, r, index)?.norm();
                    match index {
                        1 => m * t.powf(1.0 - mu),
                        2 => m * t,
                        _ => m * t * nf / r.powf(2.0 - nf),
                    }
                }
            })
        })
        .collect()
}
