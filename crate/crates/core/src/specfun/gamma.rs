use std::f64::consts::PI;

use super::{SpecialValue, EPS};
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
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
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Relative accuracy of the Lanczos sum itself.
const LANCZOS_REL_ERR: f64 = 2e-15;

/// sin(pi x) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    let (r, sign) = if r >= 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn lanczos_sum(z: f64) -> f64 {
    let mut a = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    a
}

/// Gamma for x >= 0.5.
fn gamma_positive(x: f64) -> f64 {
    if x == x.round() && x <= 171.0 {
        return (2..x as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so large arguments do not overflow before exp(-t)
    let half = t.powf((z + 0.5) / 2.0);
    SQRT_2PI * half * (-t).exp() * half * lanczos_sum(z)
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / (sin_pi(x) * gamma_positive(1.0 - x))
    } else {
        gamma_positive(x)
    }
}

/// The Gamma function on the real line.
pub fn gamma(x: f64) -> Result<SpecialValue> {
    if x.is_nan() {
        return Err(Error::Domain("gamma(NaN)".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::PoleAtNonpositiveInteger(x));
    }
    let value = gamma_unchecked(x);
    if !value.is_finite() {
        return Err(Error::Domain(format!("gamma({x}) overflows")));
    }
    let a = if x < 0.5 { 1.0 - x } else { x };
    let rel = LANCZOS_REL_ERR + 4.0 * EPS * (1.0 + a * a.ln().abs());
    Ok(SpecialValue::new(value, rel * value.abs()))
}

/// Reciprocal Gamma function, entire: zero at the nonpositive integers.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else if x < 0.5 {
        sin_pi(x) * gamma_positive(1.0 - x) / PI
    } else {
        1.0 / gamma_positive(x)
    }
}

/// ln Gamma(1 + x) for |x| <= 1/2, accurate in the relative sense near 0.
///
/// Uses ln Gamma(1+x) = -ln(1+x) + x(1 - gamma) + sum_{k>=2} (-1)^k (zeta(k) - 1) x^k / k.
pub fn ln_gamma_1p(x: f64) -> Result<f64> {
    if !(x.abs() <= 0.5) {
        return Err(Error::Domain(format!("ln_gamma_1p needs |x| <= 1/2, got {x}")));
    }
    let mut sum = 0.0;
    let mut power = -x;
    for k in 2..80 {
        power *= -x;
        let zm1 = zeta_int_minus_one(k);
        let term = zm1 * power / k as f64;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs().max(x.abs() * 1e-3) {
            break;
        }
    }
    Ok(-x.ln_1p() + x * (1.0 - EULER_GAMMA) + sum)
}

/// zeta(k) - 1 for integer k >= 2, by direct summation with an integral tail.
fn zeta_int_minus_one(k: u32) -> f64 {
    let kf = k as f64;
    if k >= 60 {
        return 2f64.powi(-(k as i32));
    }
    // Euler-Maclaurin with N = 12 keeps the error below 1e-18 for all k >= 2
    const N: u32 = 12;
    let mut s = 0.0;
    for n in (2..N).rev() {
        s += (n as f64).powf(-kf);
    }
    let nf = N as f64;
    let nk = nf.powf(-kf);
    s += nf * nk / (kf - 1.0) + 0.5 * nk;
    let b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];
    let mut rising = kf;
    let mut fact = 2.0;
    let mut npow = nk / nf;
    for (j, bj) in b.iter().enumerate() {
        s += bj / fact * rising * npow;
        let j2 = 2.0 * (j as f64 + 1.0);
        rising *= (kf + j2 - 1.0) * (kf + j2);
        fact *= (j2 + 1.0) * (j2 + 2.0);
        npow /= nf * nf;
    }
    s
}

/// ln |Gamma(x)| for x > 0.
pub fn ln_gamma(x: f64) -> Result<SpecialValue> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ln_gamma needs x > 0, got {x}")));
    }
    let value = if (x - 1.0).abs() <= 0.5 {
        ln_gamma_1p(x - 1.0)?
    } else if (x - 2.0).abs() < 0.5 {
        ln_gamma_1p(x - 2.0)? + (x - 1.0).ln()
    } else if x < 0.5 {
        ln_gamma_1p(x)? - x.ln()
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
    };
    let err = LANCZOS_REL_ERR + 4.0 * EPS * (value.abs() + x * x.ln().abs());
    Ok(SpecialValue::new(value, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn classical_values() {
        let sqrt_pi = PI.sqrt();
        assert!(rel(gamma(0.5).unwrap().value, sqrt_pi) < 1e-14);
        assert_eq!(gamma(5.0).unwrap().value, 24.0);
        assert!(rel(gamma(1.5).unwrap().value, sqrt_pi / 2.0) < 1e-14);
        assert!(rel(gamma(-0.5).unwrap().value, -2.0 * sqrt_pi) < 1e-14);
    }

    #[test]
    fn poles_are_rejected() {
        for x in [0.0, -1.0, -7.0] {
            assert_eq!(gamma(x), Err(Error::PoleAtNonpositiveInteger(x)));
            assert_eq!(rgamma(x), 0.0);
        }
    }

    #[test]
    fn recurrence_holds() {
        for x in [0.3, 1.7, 4.2, -2.5, 12.25, 29.1] {
            let lhs = gamma(x + 1.0).unwrap().value;
            let rhs = x * gamma(x).unwrap().value;
            assert!(rel(lhs, rhs) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn factorial_range_is_exact_at_integers() {
        let mut f = 1.0;
        for n in 1..=20u32 {
            assert_eq!(gamma(n as f64).unwrap().value, f);
            f *= n as f64;
        }
    }

    #[test]
    fn ln_gamma_1p_matches_log_of_gamma() {
        for x in [-0.5, -0.2, -1e-3, 1e-6, 0.1, 0.37, 0.5] {
            let direct = gamma(1.0 + x).unwrap().value.ln();
            let series = ln_gamma_1p(x).unwrap();
            assert!((direct - series).abs() < 2e-15, "x = {x}: {direct} vs {series}");
        }
        // leading behaviour -gamma x for tiny x
        let tiny = 1e-9;
        assert!(rel(ln_gamma_1p(tiny).unwrap(), -EULER_GAMMA * tiny) < 1e-8);
    }

    #[test]
    fn ln_gamma_agrees_with_gamma() {
        for x in [0.2, 0.9, 1.6, 2.4, 3.7, 10.0, 25.5] {
            let a = ln_gamma(x).unwrap().value;
            let b = gamma(x).unwrap().value.ln();
            assert!((a - b).abs() < 1e-13 * (1.0 + b.abs()), "x = {x}");
        }
    }

    #[test]
    fn sin_pi_exact_zeros() {
        for k in -5..5 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert_eq!(sin_pi(0.5), 1.0);
        assert_eq!(sin_pi(-0.5), -1.0);
    }
}
