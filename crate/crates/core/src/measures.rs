//! Vorticity measures: the analytic power-law families, the Kaden spiral,
//! finite atomic collections, and signed differences of two measures.

use std::f64::consts::PI;
use std::io::BufRead;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require, Result, VortexError};
use crate::quadrature::{integrate_with_breaks, Tolerance};

/// Radially symmetric measure with density `(cα/2π)|x|^{α−2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawRadial {
    c: f64,
    alpha: f64,
}

/// Vortex sheet on the positive real axis with line density `cα x^{α−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfLineSheet {
    c: f64,
    alpha: f64,
}

fn check_power_law(c: f64, alpha: f64) -> Result<()> {
    require(
        c.is_finite() && c > 0.0,
        "c",
        c,
        "must be positive and finite",
    )?;
    require(
        alpha > 0.0 && alpha < 1.0,
        "alpha",
        alpha,
        "must lie in (0, 1)",
    )
}

impl PowerLawRadial {
    pub fn new(c: f64, alpha: f64) -> Result<Self> {
        check_power_law(c, alpha)?;
        Ok(Self { c, alpha })
    }

    /// Skips parameter validation. Used to probe the divergence guards.
    pub fn new_unchecked(c: f64, alpha: f64) -> Self {
        Self { c, alpha }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl HalfLineSheet {
    pub fn new(c: f64, alpha: f64) -> Result<Self> {
        check_power_law(c, alpha)?;
        Ok(Self { c, alpha })
    }

    /// Skips parameter validation. Used to probe the divergence guards.
    pub fn new_unchecked(c: f64, alpha: f64) -> Self {
        Self { c, alpha }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Similarity exponent and time of a Kaden spiral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KadenParams {
    mu: f64,
    t: f64,
}

impl KadenParams {
    pub fn new(mu: f64, t: f64) -> Result<Self> {
        require(mu > 0.5 && mu < 1.0, "mu", mu, "must lie in (1/2, 1)")?;
        require(
            t.is_finite() && t > 0.0,
            "t",
            t,
            "must be positive and finite",
        )?;
        Ok(Self { mu, t })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Mass exponent `α = 2 − 1/μ`.
    pub fn alpha(&self) -> f64 {
        2.0 - 1.0 / self.mu
    }

    /// Winding angle of the spiral at radius `s`: `(t/2π) s^{−1/μ}`.
    pub fn phase(&self, s: f64) -> f64 {
        self.t / (2.0 * PI) * s.powf(-1.0 / self.mu)
    }

    /// Radius at which the winding angle equals `angle`.
    pub fn radius_at_phase(&self, angle: f64) -> f64 {
        (2.0 * PI * angle / self.t).powf(-self.mu)
    }

    pub fn with_time(&self, t: f64) -> Result<Self> {
        Self::new(self.mu, t)
    }
}

/// Vorticity of the Kaden spiral at a fixed time, `ω_t(B(0,r)) = r^{2−1/μ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KadenMeasure {
    params: KadenParams,
}

impl KadenMeasure {
    pub fn new(mu: f64, t: f64) -> Result<Self> {
        Ok(Self {
            params: KadenParams::new(mu, t)?,
        })
    }

    pub fn from_params(params: KadenParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> KadenParams {
        self.params
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha()
    }

    /// Point of the spiral at modulus `s`.
    pub fn point(&self, s: f64) -> Complex64 {
        Complex64::from_polar(s, self.params.phase(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub position: Complex64,
    pub mass: f64,
}

/// Finite collection of point vortices with positive masses.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            require(
                a.mass.is_finite() && a.mass > 0.0,
                "mass",
                a.mass,
                "atom masses must be positive",
            )?;
            require(
                a.position.re.is_finite() && a.position.im.is_finite(),
                "position",
                a.position.norm(),
                "atom positions must be finite",
            )?;
        }
        Ok(Self { atoms })
    }

    /// Convenience constructor from `(position, mass)` pairs.
    pub fn from_pairs<I: IntoIterator<Item = (Complex64, f64)>>(pairs: I) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(position, mass)| Atom { position, mass })
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Reads atoms from CSV text with header `re,im,mass`.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut atoms = Vec::new();
        let mut saw_header = false;
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| VortexError::Io(e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if !saw_header {
                let cols: Vec<&str> = line.split(',').map(str::trim).collect();
                if cols != ["re", "im", "mass"] {
                    return Err(VortexError::Parse {
                        position: lineno + 1,
                        token: line.to_string(),
                        message: "expected header `re,im,mass`".into(),
                    });
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(VortexError::Parse {
                    position: lineno + 1,
                    token: line.to_string(),
                    message: format!("expected 3 fields, found {}", fields.len()),
                });
            }
            let mut vals = [0.0; 3];
            for (v, tok) in vals.iter_mut().zip(&fields) {
                *v = tok.trim().parse::<f64>().map_err(|_| VortexError::Parse {
                    position: lineno + 1,
                    token: tok.to_string(),
                    message: "not a decimal number".into(),
                })?;
            }
            atoms.push(Atom {
                position: Complex64::new(vals[0], vals[1]),
                mass: vals[2],
            });
        }
        if !saw_header {
            return Err(VortexError::Parse {
                position: 0,
                token: String::new(),
                message: "empty atom file".into(),
            });
        }
        Self::new(atoms)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,mass\n");
        for a in &self.atoms {
            out.push_str(&format!(
                "{:?},{:?},{:?}\n",
                a.position.re, a.position.im, a.mass
            ));
        }
        out
    }
}

/// Closed set of measure families supported by every operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VorticityMeasure {
    PowerLaw(PowerLawRadial),
    HalfLine(HalfLineSheet),
    Kaden(KadenMeasure),
    Atomic(AtomicMeasure),
}

impl From<PowerLawRadial> for VorticityMeasure {
    fn from(m: PowerLawRadial) -> Self {
        Self::PowerLaw(m)
    }
}
impl From<HalfLineSheet> for VorticityMeasure {
    fn from(m: HalfLineSheet) -> Self {
        Self::HalfLine(m)
    }
}
impl From<KadenMeasure> for VorticityMeasure {
    fn from(m: KadenMeasure) -> Self {
        Self::Kaden(m)
    }
}
impl From<AtomicMeasure> for VorticityMeasure {
    fn from(m: AtomicMeasure) -> Self {
        Self::Atomic(m)
    }
}

/// Difference `plus − minus` of two admissible measures.
///
/// Not a signed measure in general (both parts may have infinite mass); all
/// linear quantities are defined componentwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedVorticity {
    pub plus: VorticityMeasure,
    pub minus: VorticityMeasure,
}

impl SignedVorticity {
    pub fn new(plus: impl Into<VorticityMeasure>, minus: impl Into<VorticityMeasure>) -> Self {
        Self {
            plus: plus.into(),
            minus: minus.into(),
        }
    }
}

/// Anything that decomposes into weighted measure components; lets moment,
/// velocity and energy routines accept measures and signed vorticities alike.
pub trait Vorticity: Sync {
    fn components(&self) -> Vec<(f64, &VorticityMeasure)>;
}

impl Vorticity for VorticityMeasure {
    fn components(&self) -> Vec<(f64, &VorticityMeasure)> {
        vec![(1.0, self)]
    }
}

impl Vorticity for SignedVorticity {
    fn components(&self) -> Vec<(f64, &VorticityMeasure)> {
        vec![(1.0, &self.plus), (-1.0, &self.minus)]
    }
}

impl VorticityMeasure {
    /// `(c, α)` when the ball mass is exactly `c·r^α`.
    pub fn power_law(&self) -> Option<(f64, f64)> {
        match self {
            Self::PowerLaw(m) => Some((m.c, m.alpha)),
            Self::HalfLine(m) => Some((m.c, m.alpha)),
            Self::Kaden(m) => Some((1.0, m.alpha())),
            Self::Atomic(_) => None,
        }
    }

    /// `ω(B(0, r))` over the open ball.
    pub fn ball_mass(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        match self {
            Self::Atomic(m) => m
                .atoms
                .iter()
                .filter(|a| a.position.norm() < r)
                .map(|a| a.mass)
                .sum(),
            _ => {
                let (c, alpha) = self.power_law().expect("analytic family");
                c * r.powf(alpha)
            }
        }
    }

    /// `∫ (1+|u|)^{-1} dω(u)`; `f64::INFINITY` when the integral diverges.
    pub fn admissibility_integral(&self) -> f64 {
        match self {
            Self::Atomic(m) => m
                .atoms
                .iter()
                .map(|a| a.mass / (1.0 + a.position.norm()))
                .sum(),
            _ => {
                let (c, alpha) = self.power_law().expect("analytic family");
                if alpha > 0.0 && alpha < 1.0 && c.is_finite() {
                    c * alpha * PI / (PI * alpha).sin()
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Moduli of atoms; the radii at which spherical averages are singular.
    pub fn singular_radii(&self) -> Vec<f64> {
        match self {
            Self::Atomic(m) => m.atoms.iter().map(|a| a.position.norm()).collect(),
            _ => Vec::new(),
        }
    }

    /// `∫ f dω` restricted to the annulus `a ≤ |u| < b` (`b` may be infinite).
    pub fn integrate<F>(&self, f: F, a: f64, b: f64) -> Result<Complex64>
    where
        F: Fn(Complex64) -> Complex64,
    {
        self.integrate_with(f, a, b, IntegrationOptions::default())
    }

    pub fn integrate_with<F>(
        &self,
        f: F,
        a: f64,
        b: f64,
        opts: IntegrationOptions,
    ) -> Result<Complex64>
    where
        F: Fn(Complex64) -> Complex64,
    {
        require(a >= 0.0, "a", a, "lower radius must be nonnegative")?;
        require(b > a, "b", b, "upper radius must exceed the lower radius")?;
        match self {
            Self::Atomic(m) => Ok(m
                .atoms
                .iter()
                .filter(|at| {
                    let s = at.position.norm();
                    s >= a && s < b
                })
                .map(|at| f(at.position) * at.mass)
                .sum()),
            Self::PowerLaw(m) => {
                radial_power_integral(m.c, m.alpha, a, b, opts, |s| circle_mean(&f, s, opts.tol))
            }
            Self::HalfLine(m) => {
                radial_power_integral(m.c, m.alpha, a, b, opts, |s| Ok(f(Complex64::new(s, 0.0))))
            }
            Self::Kaden(m) => integrate_kaden(m, &f, a, b, opts),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegrationOptions {
    pub tol: Tolerance,
    /// Radius beyond which unbounded ranges switch to `s → 1/s`, as a
    /// multiple of `max(1, a)`.
    pub cutoff_factor: f64,
    pub max_periods: usize,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::new(1e-14, 1e-11),
            cutoff_factor: 10.0,
            max_periods: 20_000,
        }
    }
}

/// `∫_a^b g(s) cα s^{α−1} ds`, computed in `w = s^α` on the bounded part and
/// with `s = 1/σ` beyond the cutoff when `b` is infinite.
fn radial_power_integral<G>(
    c: f64,
    alpha: f64,
    a: f64,
    b: f64,
    opts: IntegrationOptions,
    g: G,
) -> Result<Complex64>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let mut failure: Option<VortexError> = None;
    let mut guarded = |s: f64| match g(s) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let cutoff = if b.is_finite() {
        b
    } else {
        opts.cutoff_factor * a.max(1.0)
    };
    let inv = 1.0 / alpha;
    let head = integrate_with_breaks(
        |w: f64| guarded(w.powf(inv)) * c,
        a.powf(alpha),
        cutoff.powf(alpha),
        &[],
        opts.tol,
    )?
    .value;
    let mut total = head;
    if !b.is_finite() {
        let tail = integrate_with_breaks(
            |sigma: f64| {
                if sigma <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                guarded(1.0 / sigma) * (c * alpha * sigma.powf(-1.0 - alpha))
            },
            0.0,
            1.0 / cutoff,
            &[],
            opts.tol,
        )?
        .value;
        total += tail;
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Angular mean of `f` on the circle `|u| = s`.
fn circle_mean<F>(f: &F, s: f64, tol: Tolerance) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let est = integrate_with_breaks(
        |th: f64| f(Complex64::from_polar(s, th)),
        0.0,
        2.0 * PI,
        &[],
        tol,
    )?;
    Ok(est.value / (2.0 * PI))
}

/// Integration along the spiral, one winding at a time from the outside in.
///
/// Inside the innermost processed winding the spiral is replaced by its
/// rotational average, the radial measure `α s^{α−1} ds`. The walk stops once
/// the omitted spiral-minus-average deviation is below tolerance: either the
/// last winding's gap times the windings so far is small, or the accumulated
/// deviation, sampled at doubling winding counts and extrapolated
/// geometrically, has settled. The extrapolated remainder is then added.
fn integrate_kaden<F>(
    m: &KadenMeasure,
    f: &F,
    a: f64,
    b: f64,
    opts: IntegrationOptions,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let p = m.params();
    let alpha = p.alpha();
    let inv = 1.0 / alpha;
    let on_curve = |w: f64| f(m.point(w.powf(inv)));
    let tol = opts.tol;

    // Outer part: radii above the first full winding (phase < 2π).
    let s_one = p.radius_at_phase(2.0 * PI);
    let mut total = Complex64::new(0.0, 0.0);
    let top_lo = a.max(s_one);
    if b > top_lo {
        let cutoff = if b.is_finite() {
            b
        } else {
            opts.cutoff_factor * top_lo.max(1.0)
        };
        if cutoff > top_lo {
            total +=
                integrate_with_breaks(on_curve, top_lo.powf(alpha), cutoff.powf(alpha), &[], tol)?
                    .value;
        }
        if !b.is_finite() {
            let lo = cutoff.max(top_lo);
            total += integrate_with_breaks(
                |sigma: f64| {
                    if sigma <= 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    f(m.point(1.0 / sigma)) * (alpha * sigma.powf(-1.0 - alpha))
                },
                0.0,
                1.0 / lo,
                &[],
                tol,
            )?
            .value;
        }
    }
    if a >= s_one {
        return Ok(total);
    }

    let averaged = |lo: f64, hi: f64, tol: Tolerance| {
        radial_power_integral(
            1.0,
            alpha,
            lo,
            hi,
            IntegrationOptions { tol, ..opts },
            |s| circle_mean(f, s, tol),
        )
    };
    let mut hi = b.min(s_one);
    // Start at the winding that contains `hi`.
    let mut winding = (p.phase(hi) / (2.0 * PI)).floor().max(1.0);
    let mut periods = 0usize;
    let mut deviation = Complex64::new(0.0, 0.0);
    // Deviation and its last increment at the previous doubling.
    let mut checkpoint = (Complex64::new(0.0, 0.0), None::<Complex64>);
    // Extrapolated limits of the deviation, one per doubling.
    let mut limits: Vec<Complex64> = Vec::new();
    let mut accelerated: Option<Complex64> = None;
    let mut remainder = f64::INFINITY;
    let mut correction = Complex64::new(0.0, 0.0);
    loop {
        winding += 1.0;
        let lo = p.radius_at_phase(2.0 * PI * winding).max(a);
        let mut gap = 0.0;
        if hi > lo {
            // Absolute accuracy in proportion to the winding's share of the mass,
            // so thin inner windings do not drown in quadrature noise.
            let (wl, wh) = (lo.powf(alpha), hi.powf(alpha));
            let wtol = Tolerance {
                abs: tol.abs * (wh - wl).min(1.0),
                ..tol
            };
            let spiral = integrate_with_breaks(on_curve, wl, wh, &[], wtol)?.value;
            let d = spiral - averaged(lo, hi, wtol)?;
            gap = d.norm();
            deviation += d;
            total += spiral;
            periods += 1;
        }
        hi = hi.min(lo);
        if lo <= a {
            return Ok(total);
        }
        // The per-winding deviations decay like a power of the winding
        // count, so increments over doubling blocks shrink geometrically.
        // Their geometric limits carry O(1/K) errors, which shrink
        // geometrically in turn and are extrapolated the same way.
        if periods >= 4 && periods.is_power_of_two() {
            let step = deviation - checkpoint.0;
            if let Some(prev) = checkpoint.1 {
                match geometric_limit(deviation, step, prev) {
                    Some(limit) => limits.push(limit),
                    None => {
                        limits.clear();
                        accelerated = None;
                    }
                }
            }
            checkpoint = (deviation, Some(step));
            if let [.., l0, l1, l2] = limits[..] {
                if let Some(limit) = geometric_limit(l2, l2 - l1, l1 - l0) {
                    if let Some(old) = accelerated {
                        remainder = (limit - old).norm();
                        correction = limit - deviation;
                    }
                    accelerated = Some(limit);
                } else {
                    accelerated = None;
                }
            }
        }
        if periods >= 2 {
            let target = tol.abs.max(tol.rel * total.norm());
            if gap * periods as f64 <= target {
                return Ok(total + averaged(a, lo, tol)?);
            }
            if remainder <= target {
                return Ok(total + correction + averaged(a, lo, tol)?);
            }
        }
        if periods >= opts.max_periods {
            return Err(VortexError::NonConvergence {
                value: total.norm(),
                error: remainder.min(gap * periods as f64),
                evaluations: periods,
            });
        }
    }
}

/// `value + step·q/(1 − q)` with `q = |step|/|prev|`, when `q < 0.9`.
fn geometric_limit(value: Complex64, step: Complex64, prev: Complex64) -> Option<Complex64> {
    let q = step.norm() / prev.norm();
    (q < 0.9).then(|| value + step * (q / (1.0 - q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ball_mass_examples() {
        let p: VorticityMeasure = PowerLawRadial::new(1.0, 0.5).unwrap().into();
        assert_eq!(p.ball_mass(4.0), 2.0);
        let k: VorticityMeasure = KadenMeasure::new(0.75, 1.0).unwrap().into();
        assert!((k.ball_mass(0.5) - 0.629_960_524_947_436_6).abs() < 1e-12);
        assert_eq!(k.ball_mass(0.0), 0.0);
        assert_eq!(p.ball_mass(0.0), 0.0);
    }

    #[test]
    fn atom_on_circle_is_outside_open_ball() {
        let m: VorticityMeasure =
            AtomicMeasure::from_pairs([(c(1.0, 0.0), 2.0), (c(0.0, 0.5), 1.0)])
                .unwrap()
                .into();
        assert_eq!(m.ball_mass(1.0), 1.0);
        assert_eq!(m.ball_mass(1.0 + 1e-12), 3.0);
    }

    #[test]
    fn constructors_reject_out_of_range() {
        assert!(PowerLawRadial::new(1.0, 1.0).is_err());
        assert!(PowerLawRadial::new(0.0, 0.5).is_err());
        assert!(HalfLineSheet::new(1.0, 0.0).is_err());
        assert!(KadenMeasure::new(0.5, 1.0).is_err());
        assert!(KadenMeasure::new(0.75, 0.0).is_err());
        assert!(AtomicMeasure::from_pairs([(c(0.0, 0.0), -1.0)]).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let p: VorticityMeasure = PowerLawRadial::new(1.0, 0.5).unwrap().into();
        assert!((p.admissibility_integral() - PI / 2.0).abs() < 1e-14);
        let a: VorticityMeasure = AtomicMeasure::from_pairs([(c(3.0, 0.0), 1.0)])
            .unwrap()
            .into();
        assert_eq!(a.admissibility_integral(), 0.25);
        for t in [0.1, 1.0, 30.0] {
            let k: VorticityMeasure = KadenMeasure::new(0.75, t).unwrap().into();
            assert!((k.admissibility_integral() - 4.0 * PI / (3.0 * 3f64.sqrt())).abs() < 1e-12);
        }
        let bad: VorticityMeasure = PowerLawRadial::new_unchecked(1.0, 1.2).into();
        assert!(bad.admissibility_integral().is_infinite());
    }

    #[test]
    fn integrate_examples() {
        let k: VorticityMeasure = KadenMeasure::new(0.75, 1.0).unwrap().into();
        let one = k.integrate(|_| c(1.0, 0.0), 0.0, 0.8).unwrap();
        assert!((one.re - 0.8f64.powf(2.0 / 3.0)).abs() < 1e-10);

        let a: VorticityMeasure = AtomicMeasure::from_pairs([(c(1.0, 0.0), 2.0)])
            .unwrap()
            .into();
        assert_eq!(a.integrate(|u| u * u, 0.0, 2.0).unwrap(), c(2.0, 0.0));

        let p: VorticityMeasure = PowerLawRadial::new(1.0, 0.5).unwrap().into();
        assert!(p.integrate(|u| u, 0.0, 1.0).unwrap().norm() < 1e-12);
    }

    #[test]
    fn admissibility_by_quadrature() {
        let w = |u: Complex64| c(1.0 / (1.0 + u.norm()), 0.0);
        for m in [
            VorticityMeasure::from(PowerLawRadial::new(1.3, 0.3).unwrap()),
            HalfLineSheet::new(0.7, 0.8).unwrap().into(),
            KadenMeasure::new(0.75, 2.0).unwrap().into(),
        ] {
            let num = m.integrate(w, 0.0, f64::INFINITY).unwrap().re;
            let exact = m.admissibility_integral();
            assert!(
                (num - exact).abs() < 1e-8 * exact,
                "{m:?}: {num} vs {exact}"
            );
        }
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let text = "re,im,mass\n0.5,-1.25,2\n3,0,0.125\n";
        let m = AtomicMeasure::from_csv(text.as_bytes()).unwrap();
        assert_eq!(m.atoms().len(), 2);
        let again = AtomicMeasure::from_csv(m.to_csv().as_bytes()).unwrap();
        assert_eq!(m, again);

        let err = AtomicMeasure::from_csv("re,im,mass\n1,2,x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, VortexError::Parse { position: 2, ref token, .. } if token == "x"));
        assert!(AtomicMeasure::from_csv("x,y,m\n".as_bytes()).is_err());
        assert!(AtomicMeasure::from_csv("re,im,mass\n1,2,-1\n".as_bytes()).is_err());
    }
}
