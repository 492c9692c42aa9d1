//! Series tails needed for certified and extrapolated truncation of the
//! moment series.

/// Hurwitz zeta `ζ(s, x) = Σ_{j≥0} (j + x)^{-s}` for `s > 1`, `x > 0`.
///
/// Shifts `x` above 16 by direct summation, then applies Euler-Maclaurin with
/// Bernoulli terms up to `B_10`.
pub fn hurwitz_zeta(s: f64, x: f64) -> f64 {
    debug_assert!(s > 1.0 && x > 0.0);
    let mut head = 0.0;
    let mut x = x;
    while x < 16.0 {
        head += x.powf(-s);
        x += 1.0;
    }
    // B_{2k} / (2k)!
    const B: [f64; 5] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
    ];
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising factorial s(s+1)...(s+2k-2) times x^{-s-2k+1}
    let mut rising = s;
    let mut power = x.powf(-s - 1.0);
    for (k, b) in B.iter().enumerate() {
        tail += b * rising * power;
        let m = 2.0 * k as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        power /= x * x;
    }
    head + tail
}

/// `Σ_{n > N} 1/(n + shift)^2`, the tail of a trigamma-type series.
pub fn inverse_square_tail(n: usize, shift: f64) -> f64 {
    hurwitz_zeta(2.0, n as f64 + 1.0 + shift)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_two_is_basel() {
        assert!((hurwitz_zeta(2.0, 1.0) - PI * PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn zeta_matches_brute_force_tail() {
        // Brute-force partial sums plus an integral tail bound well below 1e-12.
        for &(s, x) in &[(2.0, 0.5), (3.5, 2.25), (2.0, 101.3)] {
            let direct: f64 = (0..2_000_000).map(|j| (j as f64 + x).powf(-s)).sum();
            let rest = (2_000_000.0 + x - 0.5f64).powf(1.0 - s) / (s - 1.0);
            let z = hurwitz_zeta(s, x);
            assert!(((direct + rest) - z).abs() < 1e-11 * z, "s={s} x={x}");
        }
    }

    #[test]
    fn half_integer_trigamma_identity() {
        // Σ_{n∈Z} 1/(n+1/2)^2 = π^2 / sin^2(π/2) = π^2
        // n ≥ 1, n = 0, n = -1, n ≤ -2 mirrored onto n ≥ 1
        let both = 2.0 * inverse_square_tail(0, 0.5) + 8.0;
        assert!((both - PI * PI).abs() < 1e-12, "{both}");
    }
}
