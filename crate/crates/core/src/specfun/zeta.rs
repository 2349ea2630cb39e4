//! Riemann zeta and Dirichlet beta functions.
//!
//! For s >= 1/2 both are summed as alternating series with the
//! Cohen-Rodriguez Villegas-Zagier acceleration; for s < 1/2 the functional
//! equations map the argument back into that half-line.

use std::f64::consts::{LN_2, PI};

use super::gamma::{gamma_unchecked, sin_pi};
use super::{SpecialValue, EPS};
use crate::error::{Error, Result};

/// Number of accelerated terms; truncation error is below (3 + sqrt 8)^-n.
const ALT_TERMS: usize = 40;

/// Accelerated sum of sum_{k>=0} (-1)^k a_k.
///
/// Returns the value and an absolute error estimate combining the
/// truncation term with accumulated rounding.
pub(crate) fn alternating_sum(n: usize, mut a: impl FnMut(usize) -> f64) -> (f64, f64) {
    let d0 = (3.0 + 8f64.sqrt()).powi(n as i32);
    let d = (d0 + 1.0 / d0) / 2.0;
    let nf = n as f64;
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    let mut magnitude = 0.0;
    let mut a_max: f64 = 0.0;
    for k in 0..n {
        let kf = k as f64;
        c = b - c;
        let ak = a(k);
        s += c * ak;
        magnitude += (c * ak).abs();
        a_max = a_max.max(ak.abs());
        b = (kf + nf) * (kf - nf) * b / ((kf + 0.5) * (kf + 1.0));
    }
    let value = s / d;
    let err = 2.0 * a_max / d + 4.0 * EPS * magnitude / d;
    (value, err)
}

/// zeta(s) from the alternating eta series, valid for every s != 1 but
/// only well conditioned for s >= 1/2 (and moderate negative s).
pub fn zeta_forward(s: f64) -> Result<SpecialValue> {
    if s == 1.0 {
        return Err(Error::PoleAtOne);
    }
    let (eta, eta_err) = alternating_sum(ALT_TERMS, |k| ((k + 1) as f64).powf(-s));
    // 1 - 2^{1-s} without cancellation near s = 1
    let denom = -((1.0 - s) * LN_2).exp_m1();
    let value = eta / denom;
    let err = eta_err / denom.abs() + 4.0 * EPS * value.abs();
    Ok(SpecialValue::new(value, err))
}

/// zeta(s) through the functional equation
/// zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s).
pub fn zeta_reflected(s: f64) -> Result<SpecialValue> {
    if s == 1.0 {
        return Err(Error::PoleAtOne);
    }
    let u = 1.0 - s;
    if u > 171.0 {
        return Err(Error::Domain(format!("zeta({s}) overflows")));
    }
    let prefactor = 2f64.powf(s) * PI.powf(s - 1.0) * gamma_unchecked(u);
    if s.abs() < 0.25 {
        // sin(pi s/2) zeta(1-s) = -sin(pi s/2)/s + sin(pi s/2) zeta_reg(1-s)
        let half = sin_pi(s / 2.0);
        let sinc = if s == 0.0 { PI / 2.0 } else { half / s };
        let reg = zeta_regular(u)?;
        let value = prefactor * (-sinc + half * reg.value);
        let err = prefactor.abs() * half.abs() * reg.abs_error_bound + 8.0 * EPS * value.abs();
        return Ok(SpecialValue::new(value, err));
    }
    let inner = if u >= 0.5 {
        zeta_forward(u)?
    } else {
        return Err(Error::Domain(format!("reflection of zeta({s}) needs s <= 1/2")));
    };
    let factor = prefactor * sin_pi(s / 2.0);
    let value = factor * inner.value;
    let err = factor.abs() * inner.abs_error_bound + 8.0 * EPS * (1.0 + u.ln()) * value.abs();
    Ok(SpecialValue::new(value, err))
}

/// The Riemann zeta function for real s != 1.
pub fn riemann_zeta(s: f64) -> Result<SpecialValue> {
    if s.is_nan() {
        return Err(Error::Domain("zeta(NaN)".into()));
    }
    if s >= 0.5 {
        zeta_forward(s)
    } else {
        zeta_reflected(s)
    }
}

const BERNOULLI_2J: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Regular part zeta(s) - 1/(s - 1), finite and accurate across s = 1.
pub fn zeta_regular(s: f64) -> Result<SpecialValue> {
    if (s - 1.0).abs() > 0.5 {
        let z = riemann_zeta(s)?;
        let value = z.value - 1.0 / (s - 1.0);
        return Ok(SpecialValue::new(
            value,
            z.abs_error_bound + 2.0 * EPS * z.value.abs(),
        ));
    }
    // Euler-Maclaurin with the N^{1-s}/(s-1) head folded into the pole term
    const N: usize = 16;
    let nf = N as f64;
    let ln_n = nf.ln();
    let mut head = 0.0;
    for n in (1..N).rev() {
        head += (n as f64).powf(-s);
    }
    let x = (1.0 - s) * ln_n;
    let expm1_ratio = if x == 0.0 { 1.0 } else { x.exp_m1() / x };
    let folded = -ln_n * expm1_ratio;
    let n_s = nf.powf(-s);
    let mut tail = 0.5 * n_s;
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n_s / nf;
    let mut last = 0.0;
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        last = b / fact * rising * npow;
        tail += last;
        let j2 = 2.0 * (j as f64 + 1.0);
        rising *= (s + j2 - 1.0) * (s + j2);
        fact *= (j2 + 1.0) * (j2 + 2.0);
        npow /= nf * nf;
    }
    let value = head + folded + tail;
    Ok(SpecialValue::new(value, last.abs() + 8.0 * EPS * head.abs()))
}

/// Dirichlet beta function sum_{k>=0} (-1)^k (2k+1)^{-s}, entire in s.
pub fn dirichlet_beta(s: f64) -> Result<SpecialValue> {
    if s.is_nan() {
        return Err(Error::Domain("beta(NaN)".into()));
    }
    if s >= 0.5 {
        let (value, err) = alternating_sum(ALT_TERMS, |k| ((2 * k + 1) as f64).powf(-s));
        return Ok(SpecialValue::new(value, err + 2.0 * EPS * value.abs()));
    }
    // beta(1-u) = (2/pi)^u sin(pi u/2) Gamma(u) beta(u)
    let u = 1.0 - s;
    if u > 171.0 {
        return Err(Error::Domain(format!("beta({s}) overflows")));
    }
    let inner = dirichlet_beta(u)?;
    let factor = (2.0 / PI).powf(u) * sin_pi(u / 2.0) * gamma_unchecked(u);
    let value = factor * inner.value;
    let err = factor.abs() * inner.abs_error_bound + 8.0 * EPS * (1.0 + u.ln()) * value.abs();
    Ok(SpecialValue::new(value, err))
}

/// beta(s) - pi/4 without cancellation for s near 1.
pub fn beta_minus_quarter_pi(s: f64) -> Result<SpecialValue> {
    if (s - 1.0).abs() > 0.5 {
        let b = dirichlet_beta(s)?;
        return Ok(SpecialValue::new(
            b.value - PI / 4.0,
            b.abs_error_bound + EPS * b.value.abs(),
        ));
    }
    let shift = s - 1.0;
    let (value, err) = alternating_sum(ALT_TERMS, |k| {
        let m = (2 * k + 1) as f64;
        (-shift * m.ln()).exp_m1() / m
    });
    Ok(SpecialValue::new(value, err + 4.0 * EPS * value.abs()))
}
