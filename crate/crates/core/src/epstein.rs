//! Continued lattice moment sums over the square lattice.
//!
//! Every moment sum sum' z1^{2p} z2^{2q} / |z|^{nu+2p+2q} reduces to the
//! Epstein zeta value Z0(nu) = 4 zeta(nu/2) beta(nu/2) and the one-sided
//! moments C_n(nu) = sum' z1^{2n} / |z|^{nu+2n}, which have an exponentially
//! convergent Bessel double series.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::specfun::{
    alternating_sum, beta_minus_quarter_pi, bessel_k_unchecked, binomial,
    chebyshev_even_deriv_at_zero, dirichlet_beta, factorial, gamma, pochhammer, rgamma,
    riemann_zeta, zeta_regular, SpecialValue,
};

/// Distance below which an exponent counts as sitting on a pole.
pub const POLE_TOL: f64 = 1e-9;

/// Largest product z1 z2 kept in the Bessel double series.
const BESSEL_INDEX_CAP: usize = 40;

/// A real interaction exponent with pole bookkeeping: the continued sums
/// have simple poles at nu = 2 + 2k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionExponent {
    nu: f64,
    nearest_pole: Option<f64>,
}

impl InteractionExponent {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() {
            return Err(Error::Domain(format!("exponent must be finite, got {nu}")));
        }
        let k = ((nu - 2.0) / 2.0).round();
        let pole = 2.0 + 2.0 * k;
        let nearest_pole = (k >= 0.0 && (nu - pole).abs() <= POLE_TOL).then_some(pole);
        Ok(Self { nu, nearest_pole })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn nearest_pole(&self) -> Option<f64> {
        self.nearest_pole
    }

    /// The exponent shifted by `delta`, as used for the order-k operator
    /// coefficients which live at nu - 2k.
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        Self::new(self.nu + delta)
    }

    fn reject_pole_at_two(&self) -> Result<()> {
        if (self.nu - 2.0).abs() <= POLE_TOL {
            Err(Error::AtPole {
                nu: self.nu,
                pole: 2.0,
            })
        } else {
            Ok(())
        }
    }
}

/// The continued value of sum' z1^{2p} z2^{2q} / |z|^{nu+2p+2q}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSum {
    pub p: usize,
    pub q: usize,
    pub nu: f64,
    pub value: f64,
    pub abs_error_bound: f64,
}

impl MomentSum {
    fn from_special(p: usize, q: usize, nu: f64, v: SpecialValue) -> Self {
        Self {
            p,
            q,
            nu,
            value: v.value,
            abs_error_bound: v.abs_error_bound,
        }
    }
}

/// Z0(nu) = sum' |z|^{-nu} over Z^2, continued to nu != 2.
pub fn epstein_z0_square(nu: InteractionExponent) -> Result<MomentSum> {
    nu.reject_pole_at_two()?;
    let s = nu.nu / 2.0;
    let z = riemann_zeta(s)?;
    let b = dirichlet_beta(s)?;
    Ok(MomentSum::from_special(0, 0, nu.nu, z.mul(b).scale(4.0)))
}

/// Z0(nu) - 2 pi / (nu - 2), the regular part at the pole nu = 2.
///
/// Accurate for nu close to 2, including nu = 2 itself.
pub fn z0_regular(nu: f64) -> Result<SpecialValue> {
    let eps = nu - 2.0;
    if eps.abs() > 0.5 {
        let z0 = epstein_z0_square(InteractionExponent::new(nu)?)?;
        let value = z0.value - 2.0 * PI / eps;
        return Ok(SpecialValue::new(
            value,
            z0.abs_error_bound + 2.0 * f64::EPSILON * z0.value.abs(),
        ));
    }
    // 4 zeta(s) beta(s) with zeta(s) = 2/eps + zeta_reg(s), s = 1 + eps/2:
    // the pole part 8 beta / eps splits into 2 pi / eps + 8 (beta - pi/4) / eps
    let s = nu / 2.0;
    let slope = beta_slope(s - 1.0);
    let reg = zeta_regular(s)?;
    let b = dirichlet_beta(s)?;
    let value = 4.0 * slope.value + 4.0 * reg.value * b.value;
    let err = 4.0 * slope.abs_error_bound
        + 4.0 * (reg.abs_error_bound * b.value.abs() + b.abs_error_bound * reg.value.abs())
        + 4.0 * f64::EPSILON * value.abs();
    Ok(SpecialValue::new(value, err))
}

/// (beta(1 + shift) - pi/4) / shift, with the derivative at shift = 0.
fn beta_slope(shift: f64) -> SpecialValue {
    if shift == 0.0 {
        let (value, err) = alternating_sum(40, |k| {
            let m = (2 * k + 1) as f64;
            -m.ln() / m
        });
        return SpecialValue::new(value, err);
    }
    let d = beta_minus_quarter_pi(1.0 + shift).expect("beta is entire");
    SpecialValue::new(d.value / shift, d.abs_error_bound / shift.abs())
}

/// Gamma(a) zeta(b) for b = 2a - 2n, finite even where Gamma has a pole
/// (zeta then has a trivial zero).
fn gamma_zeta_product(a: f64, b: f64, n: usize) -> Result<SpecialValue> {
    if b >= 0.0 {
        let g = gamma(a)?;
        let z = riemann_zeta(b)?;
        return Ok(g.mul(z));
    }
    // the functional equation of zeta and the reflection formula combine to
    // Gamma(a) zeta(b) = (-1)^n (2 pi)^b Gamma(1-b) zeta(1-b) / Gamma(1-a)
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let g = gamma(1.0 - b)?;
    let z = riemann_zeta(1.0 - b)?;
    let factor = sign * (2.0 * PI).powf(b) * rgamma(1.0 - a);
    Ok(g.mul(z).scale(factor))
}

/// The raw one-sided moment C_n(nu), with C_0 = Z0.
fn moment_c(n: usize, nu: InteractionExponent) -> Result<MomentSum> {
    if n == 0 {
        return epstein_z0_square(nu);
    }
    nu.reject_pole_at_two()?;
    let mu = nu.nu;
    let nf = n as f64;
    let inv_gamma = rgamma(mu / 2.0 + nf);
    if inv_gamma == 0.0 {
        return Ok(MomentSum::from_special(n, 0, mu, SpecialValue::new(0.0, 0.0)));
    }
    let head = gamma_zeta_product(mu / 2.0 + nf - 0.5, mu - 1.0, n)?
        .scale(2.0 * PI.sqrt() * inv_gamma);

    let order = (mu - 1.0) / 2.0 + nf;
    let half_exp = (mu - 1.0) / 2.0;
    let mut groups = Vec::with_capacity(BESSEL_INDEX_CAP);
    let mut bessel_err = 0.0;
    for m in 1..=BESSEL_INDEX_CAP {
        let mf = m as f64;
        let k = bessel_k_unchecked(order, 2.0 * PI * mf);
        let weight = (PI * mf).powi(n as i32);
        let mut divisor_sum = 0.0;
        for z1 in 1..=m {
            if m % z1 == 0 {
                let z2 = (m / z1) as f64;
                divisor_sum += (z2 / z1 as f64).powf(half_exp);
            }
        }
        let term = weight * k.value * divisor_sum;
        bessel_err += weight * k.abs_error_bound * divisor_sum;
        groups.push(term);
    }
    let series: f64 = groups.iter().rev().sum();
    let last = *groups.last().expect("nonempty");
    if last.abs() > 1e-17 * series.abs() && last != 0.0 {
        return Err(Error::ConvergenceFailure {
            what: "Bessel double series",
            terms: BESSEL_INDEX_CAP,
        });
    }
    let prefactor = 8.0 * PI.powf(mu / 2.0) * inv_gamma;
    let tail = SpecialValue::new(
        prefactor * series,
        prefactor.abs() * (bessel_err + last.abs() + 4.0 * f64::EPSILON * series.abs()),
    );
    let value = head.value + tail.value;
    let err = head.abs_error_bound + tail.abs_error_bound + 2.0 * f64::EPSILON * value.abs();
    Ok(MomentSum::from_special(n, 0, mu, SpecialValue::new(value, err)))
}

/// C_n(nu) = sum' z1^{2n} / |z|^{nu+2n} for n >= 1, continued to nu != 2.
pub fn c_n(n: usize, nu: InteractionExponent) -> Result<MomentSum> {
    if n == 0 {
        return Err(Error::Domain("c_n needs n >= 1; C_0 is Z0".into()));
    }
    moment_c(n, nu)
}

/// Memo table for C_n values keyed by (n, nu bits). Safe to share between
/// threads; the stored values do not depend on the access order.
#[derive(Debug, Default)]
pub struct MomentCache {
    table: RwLock<HashMap<(usize, u64), MomentSum>>,
}

impl MomentCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// C_n(nu) with C_0 = Z0.
    pub fn c(&self, n: usize, nu: InteractionExponent) -> Result<MomentSum> {
        let key = (n, nu.nu.to_bits());
        if let Some(v) = self.table.read().expect("poisoned").get(&key) {
            return Ok(*v);
        }
        let v = moment_c(n, nu)?;
        self.table.write().expect("poisoned").insert(key, v);
        Ok(v)
    }

    /// The binomial reduction S_{p,q} = sum_r binom(q, r) (-1)^r C_{p+r}.
    pub fn s_pq(&self, p: usize, q: usize, nu: InteractionExponent) -> Result<MomentSum> {
        let mut value = 0.0;
        let mut err = 0.0;
        let mut magnitude = 0.0;
        for r in 0..=q {
            let c = self.c(p + r, nu)?;
            let w = binomial(q as u32, r as u32) * if r % 2 == 0 { 1.0 } else { -1.0 };
            value += w * c.value;
            err += w.abs() * c.abs_error_bound;
            magnitude += (w * c.value).abs();
        }
        Ok(MomentSum {
            p,
            q,
            nu: nu.nu,
            value,
            abs_error_bound: err + 2.0 * (q + 1) as f64 * f64::EPSILON * magnitude,
        })
    }

    /// S_{p,q} reduced from the larger index, which needs the fewest terms.
    pub fn s_pq_balanced(&self, p: usize, q: usize, nu: InteractionExponent) -> Result<MomentSum> {
        let s = self.s_pq(p.max(q), p.min(q), nu)?;
        Ok(MomentSum { p, q, ..s })
    }

    /// sum_{k<=m} T_{2m}^{(2k)}(0) / (2k)! C_k(nu): the solid-harmonic moment
    /// sum' Re((z1 + i z2)^{2m}) / |z|^{nu+2m}.
    pub fn solid_harmonic(&self, m: usize, nu: InteractionExponent) -> Result<MomentSum> {
        let mut value = 0.0;
        let mut err = 0.0;
        let mut magnitude = 0.0;
        for k in 0..=m {
            let w = chebyshev_even_deriv_at_zero(m as u32, k as u32) / factorial(2 * k as u32);
            let c = self.c(k, nu)?;
            value += w * c.value;
            err += w.abs() * c.abs_error_bound;
            magnitude += (w * c.value).abs();
        }
        Ok(MomentSum {
            p: m,
            q: 0,
            nu: nu.nu,
            value,
            abs_error_bound: err + 2.0 * (m + 1) as f64 * f64::EPSILON * magnitude,
        })
    }
}

/// S_{p,q}(nu) by the binomial reduction, taken literally in the order given.
pub fn s_pq(p: usize, q: usize, nu: InteractionExponent) -> Result<MomentSum> {
    MomentCache::new().s_pq(p, q, nu)
}

/// sum' Re((z1 + i z2)^{2m}) / |z|^{nu+2m} through the Chebyshev expansion.
pub fn solid_harmonic_moment(m: usize, nu: InteractionExponent) -> Result<MomentSum> {
    MomentCache::new().solid_harmonic(m, nu)
}

/// Weight of Delta^k P(0) in the finite-part integral of P / |z|^nu over a
/// disc of radius delta: -2 pi (1/2)_k / ((2k)! (1)_k) delta^{2+2k-nu} / (nu-2-2k).
pub(crate) fn ball_weight(k: usize, nu: f64, delta: f64) -> f64 {
    let kk = k as u32;
    let shape = 2.0 * PI * pochhammer(0.5, kk) / (factorial(2 * kk) * factorial(kk));
    let power = 2.0 + 2.0 * k as f64 - nu;
    shape * delta.powf(power) / power
}

/// Finite-part integral of P(z) / |z|^nu over the disc of radius `delta`
/// for an even polynomial P given by its Laplacian powers at the origin,
/// `laplacian_values[k] = Delta^k P(0)`.
pub fn hadamard_poly_ball(
    delta: f64,
    laplacian_values: &[f64],
    nu: InteractionExponent,
) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("ball radius must be positive, got {delta}")));
    }
    for (k, _) in laplacian_values.iter().enumerate() {
        let pole = 2.0 + 2.0 * k as f64;
        if (nu.nu - pole).abs() <= POLE_TOL {
            return Err(Error::AtPole { nu: nu.nu, pole });
        }
    }
    Ok(laplacian_values
        .iter()
        .enumerate()
        .map(|(k, lap)| ball_weight(k, nu.nu, delta) * lap)
        .sum())
}
