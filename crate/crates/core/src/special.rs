//! Special functions used by density formulas: unit-ball volume, the Riemann
//! zeta function at integers, and the Möbius function.

use std::f64::consts::PI;

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7, n = 9).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// `ln V_m`, the log-volume of the unit ball in `R^m`.
pub fn ln_unit_ball_volume(m: usize) -> f64 {
    let m = m as f64;
    0.5 * m * PI.ln() - ln_gamma(0.5 * m + 1.0)
}

/// `V_m = π^{m/2} / Γ(m/2 + 1)`, computed exactly by the two-step recurrence
/// `V_m = 2π/m · V_{m-2}` for moderate `m`.
pub fn unit_ball_volume(m: usize) -> f64 {
    if m > 300 {
        return ln_unit_ball_volume(m).exp();
    }
    let mut v = if m % 2 == 0 { 1.0 } else { 2.0 };
    let mut d = if m % 2 == 0 { 2 } else { 3 };
    while d <= m {
        v *= 2.0 * PI / d as f64;
        d += 2;
    }
    v
}

/// `ζ(s)` for integer `s >= 2`: direct summation up to `N` plus the integral
/// tail `N^{1-s}/(s-1)` with its Euler-Maclaurin corrections. Absolute error
/// is far below `1e-12` for every `s >= 2`.
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2, "zeta is only evaluated at integers >= 2");
    const N: u64 = 1000;
    let sf = s as f64;
    // sum small terms first for accuracy
    let mut sum = 0.0;
    for k in (1..N).rev() {
        sum += (k as f64).powf(-sf);
    }
    let n = N as f64;
    let tail = n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powf(-sf) + sf / 12.0 * n.powf(-sf - 1.0)
        - sf * (sf + 1.0) * (sf + 2.0) / 720.0 * n.powf(-sf - 3.0);
    sum + tail
}

/// Möbius function.
pub fn mobius(mut n: u64) -> i32 {
    assert!(n >= 1);
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Partial sum `Σ_{r <= terms} μ(r) / r^s`, which tends to `1/ζ(s)`.
pub fn mobius_partial_sum(s: u32, terms: u64) -> f64 {
    (1..=terms)
        .map(|r| mobius(r) as f64 * (r as f64).powi(-(s as i32)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_known_values() {
        assert!((zeta(2) - PI * PI / 6.0).abs() < 1e-12);
        assert!((zeta(4) - PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((zeta(8) - PI.powi(8) / 9450.0).abs() < 1e-12);
        assert!((zeta(3) - 1.202_056_903_159_594_3).abs() < 1e-12);
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(8) - PI.powi(4) / 24.0).abs() < 1e-13);
        for m in 1..60 {
            let rel = (ln_unit_ball_volume(m).exp() - unit_ball_volume(m)).abs() / unit_ball_volume(m);
            assert!(rel < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1), *e);
        }
    }

    #[test]
    fn mobius_sums_invert_zeta() {
        // tail of Σ μ(r)/r^s beyond R is at most R^{1-s}/(s-1)
        for s in [2u32, 3, 4, 8] {
            let terms = 20_000;
            let bound = (terms as f64).powf(1.0 - s as f64) / (s as f64 - 1.0);
            let gap = (mobius_partial_sum(s, terms) - 1.0 / zeta(s)).abs();
            assert!(gap <= bound + 1e-15, "s = {s}: gap {gap} > {bound}");
        }
    }
}
