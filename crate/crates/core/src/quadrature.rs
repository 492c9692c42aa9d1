//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands, the
//! interval transforms used for unbounded ranges, and fixed Gauss-Legendre
//! rules for tensor-product grids.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Result, VortexError};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_293_229_006,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_146,
];

/// Stopping rule for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Maximum number of panels kept in the adaptive partition.
    pub max_panels: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_panels: 2000,
        }
    }

    pub const fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-13, 1e-10)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

impl Estimate {
    fn into_error(self) -> VortexError {
        VortexError::NonConvergence {
            value: self.value.norm(),
            error: self.error,
            evaluations: self.evaluations,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One application of the 21-point Kronrod rule on `[a, b]`, returning the
/// Kronrod value and the QUADPACK-style error estimate.
pub fn kronrod21<F>(f: &mut F, a: f64, b: f64) -> (Complex64, f64)
where
    F: FnMut(f64) -> Complex64,
{
    let (value, err, _) = kronrod21_abs(f, a, b);
    (value, err)
}

/// [`kronrod21`] that also returns `∫|f|` over the panel.
fn kronrod21_abs<F>(f: &mut F, a: f64, b: f64) -> (Complex64, f64, f64)
where
    F: FnMut(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs_sum = fc.norm() * WGK[10];
    let mut fv = [Complex64::new(0.0, 0.0); 20];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kronrod += (f1 + f2) * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = WGK[10] * (fc - mean).norm();
    for j in 0..10 {
        asc += WGK[j] * ((fv[2 * j] - mean).norm() + (fv[2 * j + 1] - mean).norm());
    }
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (kronrod * half, err, res_abs)
}

/// Globally adaptive integration of `f` over `[a, b]`, with the initial
/// partition split at `breaks` (points outside `(a, b)` are ignored).
pub fn integrate_with_breaks<F>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Complex64,
{
    if a == b {
        return Ok(Estimate {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut points: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > lo && *x < hi)
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut edges = Vec::with_capacity(points.len() + 2);
    edges.push(lo);
    edges.extend(points);
    edges.push(hi);

    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut total_abs = 0.0;
    let mut evaluations = 0;
    for w in edges.windows(2) {
        let (value, error, abs) = kronrod21_abs(&mut f, w[0], w[1]);
        evaluations += 21;
        total_abs += abs;
        total += value;
        total_err += error;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
            abs,
        });
    }
    // Panels that can no longer be split are parked here.
    let mut frozen: Vec<Panel> = Vec::new();
    let mut frozen_err = 0.0;
    // Panel errors never drop below 50ε∫|f|, so that is the attainable floor.
    let target = |total: Complex64, total_abs: f64| {
        tol.target(total.norm())
            .max(100.0 * f64::EPSILON * total_abs)
    };
    loop {
        if total_err <= target(total, total_abs) {
            break;
        }
        if heap.len() >= tol.max_panels {
            let est = Estimate {
                value: total * sign,
                error: total_err,
                evaluations,
            };
            return Err(est.into_error());
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) < 4.0 * f64::EPSILON * mid.abs().max(1e-300)
        {
            frozen_err += worst.error;
            frozen.push(worst);
            if heap.is_empty() {
                break;
            }
            if total_err - frozen_err <= target(total, total_abs) {
                break;
            }
            continue;
        }
        let (v1, e1, a1) = kronrod21_abs(&mut f, worst.a, mid);
        let (v2, e2, a2) = kronrod21_abs(&mut f, mid, worst.b);
        evaluations += 42;
        total_abs += a1 + a2 - worst.abs;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            abs: a1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            abs: a2,
        });
    }
    // Re-sum in a fixed order so results do not depend on heap history.
    let mut panels = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: Complex64 = panels.iter().map(|p| p.value).sum();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(VortexError::NonConvergence {
            value: f64::NAN,
            error: f64::INFINITY,
            evaluations,
        });
    }
    Ok(Estimate {
        value: value * sign,
        error: total_err,
        evaluations,
    })
}

/// Adaptive integration over `[a, b]` without interior breakpoints.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> Complex64,
{
    integrate_with_breaks(f, a, b, &[], tol)
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F>(mut f: F, a: f64, b: f64, breaks: &[f64], tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate_with_breaks(|x| Complex64::new(f(x), 0.0), a, b, breaks, tol).map(|e| e.value.re)
}

/// `∫_a^∞ f(x) dx` for integrands with exponential-type decay on the length
/// scale `scale`, via `x = a + scale·τ/(1−τ)`.
pub fn integrate_semi_infinite<F>(mut f: F, a: f64, scale: f64, tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> Complex64,
{
    let g = move |tau: f64| {
        let one_minus = 1.0 - tau;
        if one_minus <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let x = a + scale * tau / one_minus;
        let jac = scale / (one_minus * one_minus);
        let v = f(x) * jac;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    integrate(g, 0.0, 1.0, tol)
}

/// `∫_{x0}^∞ f(x) dx` for integrands decaying like `x^{-decay}` (`decay > 1`).
///
/// The substitution `x = x0·τ^{-1/(decay−1)}` maps the tail onto `(0, 1]` and
/// turns the leading algebraic decay into a constant.
pub fn integrate_power_tail<F>(mut f: F, x0: f64, decay: f64, tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> Complex64,
{
    debug_assert!(x0 > 0.0 && decay > 1.0);
    let k = 1.0 / (decay - 1.0);
    let g = move |tau: f64| {
        if tau <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let x = x0 * tau.powf(-k);
        let jac = x0 * k * tau.powf(-k - 1.0);
        let v = f(x) * jac;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    integrate(g, 0.0, 1.0, tol)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre rule on the partition given by `edges`.
pub fn composite_rule(edges: &[f64], order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let mut out = Vec::with_capacity((edges.len().saturating_sub(1)) * order);
    for e in edges.windows(2) {
        let c = 0.5 * (e[0] + e[1]);
        let h = 0.5 * (e[1] - e[0]);
        for (xi, wi) in x.iter().zip(&w) {
            out.push((c + h * xi, h * wi));
        }
    }
    out
}

/// `(L_n(z), L_{n−1}(z))` by the three-term recurrence.
fn laguerre_pair(n: usize, z: f64) -> (f64, f64) {
    let (mut p1, mut p2) = (1.0, 0.0);
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j as f64 - 1.0 - z) * p2 - (j as f64 - 1.0) * p3) / j as f64;
    }
    (p1, p2)
}

/// Gauss-Laguerre nodes and weights for `∫_0^∞ e^{−x} f(x) dx`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        for _ in 0..100 {
            let (p1, p2) = laguerre_pair(n, z);
            let dz = p1 / (nf * (p1 - p2) / z);
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        let (p1, p2) = laguerre_pair(n, z);
        let pp = nf * (p1 - p2) / z;
        nodes[i] = z;
        weights[i] = -1.0 / (pp * nf * p2);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn kronrod_weights_sum_to_two() {
        let s: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert!((s - 2.0).abs() < 1e-14);
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn kronrod_is_exact_for_degree_31() {
        for deg in [0, 5, 19, 30, 31] {
            let (v, _) = kronrod21(&mut |x: f64| re(x.powi(deg)), 0.0, 1.0);
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((v.re - exact).abs() < 1e-14, "deg {deg}");
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let est = integrate(|x| re(x.powf(-0.5)), 0.0, 1.0, Tolerance::new(0.0, 1e-10)).unwrap();
        assert!((est.value.re - 2.0).abs() < 1e-9);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let est = integrate(|x| re(x * x), 1.0, 0.0, Tolerance::default()).unwrap();
        assert!((est.value.re + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn semi_infinite_exponential() {
        let est =
            integrate_semi_infinite(|x| re((-x).exp()), 0.0, 1.0, Tolerance::default()).unwrap();
        assert!((est.value.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn power_tail() {
        let est = integrate_power_tail(
            |x| re(1.0 / (x * x * (1.0 + 1.0 / x))),
            1.0,
            2.0,
            Tolerance::default(),
        )
        .unwrap();
        // ∫_1^∞ dx / (x(x+1)) = ln 2
        assert!((est.value.re - std::f64::consts::LN_2).abs() < 1e-10);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 16] {
            let (x, w) = gauss_legendre(n);
            let deg = 2 * n as i32 - 1;
            let s: f64 = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| wi * (xi + 1.0).powi(deg))
                .sum();
            let exact = 2f64.powi(deg + 1) / (deg as f64 + 1.0);
            assert!((s - exact).abs() < 1e-11 * exact, "n={n}");
        }
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let tol = Tolerance::new(0.0, 1e-14).with_max_panels(3);
        let err = integrate(|x| re((50.0 * x).sin() / x.sqrt()), 0.0, 10.0, tol).unwrap_err();
        assert!(matches!(err, VortexError::NonConvergence { .. }));
    }

    #[test]
    fn laguerre_moments() {
        let (x, w) = gauss_laguerre(40);
        // ∫ x^k e^{-x} = k!
        let mut fact = 1.0;
        for k in 0..40 {
            if k > 0 {
                fact *= k as f64;
            }
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k)).sum();
            assert!((q - fact).abs() < 1e-12 * fact, "k={k}: {q} vs {fact}");
        }
    }
}
