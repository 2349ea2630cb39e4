use crate::epstein::{ball_weight, InteractionExponent, MomentCache};
use crate::error::{Error, Result};
use crate::lattice::Vec2;
use crate::specfun::{binomial, factorial};

use super::field::SmoothField;

/// Highest supported operator order. Beyond it the factorials and moment
/// magnitudes leave the comfortable double range.
pub const MAX_ORDER: usize = 12;

/// A local differential operator sum_{p+q<=order} c_{pq} d1^{2p} d2^{2q}.
#[derive(Debug, Clone, PartialEq)]
pub struct HsemOperator {
    order: usize,
    nu: InteractionExponent,
    spacing: f64,
    coeffs: Vec<f64>,
    errors: Vec<f64>,
}

fn index(p: usize, q: usize) -> usize {
    let k = p + q;
    k * (k + 1) / 2 + q
}

impl HsemOperator {
    fn zeros(order: usize, nu: InteractionExponent, spacing: f64) -> Self {
        let len = index(0, order) + 1;
        Self {
            order,
            nu,
            spacing,
            coeffs: vec![0.0; len],
            errors: vec![0.0; len],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nu(&self) -> InteractionExponent {
        self.nu
    }

    /// Lattice spacing h of the lattice h Z^2.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Coefficient of d1^{2p} d2^{2q}, if p + q is within the order.
    pub fn coeff(&self, p: usize, q: usize) -> Option<f64> {
        (p + q <= self.order).then(|| self.coeffs[index(p, q)])
    }

    pub fn coeff_error(&self, p: usize, q: usize) -> Option<f64> {
        (p + q <= self.order).then(|| self.errors[index(p, q)])
    }

    /// All (p, q, coefficient) triples by increasing total order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.order).flat_map(move |k| (0..=k).map(move |q| (k - q, q, self.coeffs[index(k - q, q)])))
    }

    /// The same operator cut down to a lower order.
    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let len = index(0, order) + 1;
        Self {
            order,
            nu: self.nu,
            spacing: self.spacing,
            coeffs: self.coeffs[..len].to_vec(),
            errors: self.errors[..len].to_vec(),
        }
    }

    fn add(&mut self, p: usize, q: usize, value: f64, error: f64) {
        let i = index(p, q);
        self.coeffs[i] += value;
        self.errors[i] += error;
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        Err(Error::OrderTooHigh {
            ell: order,
            max: MAX_ORDER,
        })
    } else {
        Ok(())
    }
}

/// Rejects exponents sitting on one of the poles nu = 2 + 2k, k <= order.
fn check_poles(order: usize, nu: InteractionExponent) -> Result<()> {
    match nu.nearest_pole() {
        Some(pole) if pole <= 2.0 + 2.0 * order as f64 => Err(Error::AtPole { nu: nu.nu(), pole }),
        _ => Ok(()),
    }
}

fn check_spacing(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("lattice spacing must be positive, got {h}")))
    }
}

/// Assembles the operator for the lattice h Z^2 from the binomial
/// reduction of the moment sums.
///
/// The order-k part is (1/(2k)!) sum' <z, grad>^{2k} / |z|^nu, whose
/// coefficient of d1^{2p} d2^{2q} is binom(2k, 2p) S_{p,q}(nu - 2k) h^{2k-nu} / (2k)!.
pub fn build_operator(order: usize, nu: InteractionExponent, h: f64) -> Result<HsemOperator> {
    build_operator_cached(order, nu, h, &MomentCache::new())
}

pub fn build_operator_cached(
    order: usize,
    nu: InteractionExponent,
    h: f64,
    cache: &MomentCache,
) -> Result<HsemOperator> {
    check_order(order)?;
    check_poles(order, nu)?;
    check_spacing(h)?;
    let mut op = HsemOperator::zeros(order, nu, h);
    for k in 0..=order {
        let shifted = nu.shifted(-2.0 * k as f64)?;
        let scale = h.powf(2.0 * k as f64 - nu.nu()) / factorial(2 * k as u32);
        for p in 0..=k {
            let q = k - p;
            let s = cache.s_pq_balanced(p, q, shifted)?;
            let w = binomial(2 * k as u32, 2 * p as u32) * scale;
            op.add(p, q, w * s.value, w.abs() * s.abs_error_bound);
        }
    }
    Ok(op)
}

/// (1/2 pi) int cos^k for n = 0 and (1/pi) int cos(n phi) cos^k(phi) dphi
/// otherwise: the cosine-series coefficients of cos^k.
pub fn angular_coefficient(n: usize, k: usize) -> f64 {
    if n > k || (k - n) % 2 == 1 {
        return 0.0;
    }
    let b = binomial(k as u32, ((k - n) / 2) as u32);
    if n == 0 {
        b / 2f64.powi(k as i32)
    } else {
        b / 2f64.powi(k as i32 - 1)
    }
}

/// Assembles the h = 1 operator from solid harmonics:
/// <z, grad>^{2k} = sum_m a_{2m}^{(2k)} A_{2m}(z) |z|^{2(k-m)} A_{2m}(grad) Delta^{k-m}
/// plus sine terms whose lattice sums vanish by reflection symmetry.
pub fn build_operator_solid_harmonic(order: usize, nu: InteractionExponent) -> Result<HsemOperator> {
    check_order(order)?;
    check_poles(order, nu)?;
    let cache = MomentCache::new();
    let mut op = HsemOperator::zeros(order, nu, 1.0);
    for k in 0..=order {
        let shifted = nu.shifted(-2.0 * k as f64)?;
        let inv_fact = 1.0 / factorial(2 * k as u32);
        for m in 0..=k {
            let moment = cache.solid_harmonic(m, shifted)?;
            let weight = angular_coefficient(2 * m, 2 * k) * moment.value * inv_fact;
            let weight_err = angular_coefficient(2 * m, 2 * k) * moment.abs_error_bound * inv_fact;
            let r = k - m;
            // A_{2m}(grad) = sum_j binom(2m, 2j) (-1)^j d1^{2m-2j} d2^{2j}
            for j in 0..=m {
                let a = binomial(2 * m as u32, 2 * j as u32) * if j % 2 == 0 { 1.0 } else { -1.0 };
                // Delta^r = sum_i binom(r, i) d1^{2i} d2^{2(r-i)}
                for i in 0..=r {
                    let c = a * binomial(r as u32, i as u32);
                    op.add(m - j + i, j + r - i, c * weight, c.abs() * weight_err);
                }
            }
        }
    }
    Ok(op)
}

/// sum_{p+q<=order} c_{pq} d1^{2p} d2^{2q} field(x).
pub fn apply_operator(op: &HsemOperator, field: &dyn SmoothField, x: Vec2) -> Result<f64> {
    let needed = 2 * op.order;
    if field.max_order() < needed {
        return Err(Error::InsufficientSmoothness {
            needed,
            available: field.max_order(),
        });
    }
    Ok(op
        .terms()
        .map(|(p, q, c)| c * field.partial(2 * p, 2 * q, x))
        .sum())
}

/// The operator paired with an ordinary integral outside the disc of
/// radius epsilon instead of a finite-part integral over the plane.
///
/// Adds the finite-part integral of the Taylor terms over that disc, per
/// unit covolume: -(2 pi / h^2) (1/2)_k / ((2k)! k!) eps^{2+2k-nu} / (nu-2-2k)
/// on each Delta^k.
pub fn sem_epsilon_operator(
    order: usize,
    nu: InteractionExponent,
    epsilon: f64,
    h: f64,
) -> Result<HsemOperator> {
    check_spacing(h)?;
    if !(epsilon > 0.0 && epsilon < h) {
        return Err(Error::EpsilonTooLarge { epsilon, limit: h });
    }
    let mut op = build_operator(order, nu, h)?;
    let covolume = h * h;
    for k in 0..=order {
        let correction = ball_weight(k, nu.nu(), epsilon) / covolume;
        for p in 0..=k {
            let c = binomial(k as u32, p as u32) * correction;
            op.add(p, k - p, c, 4.0 * f64::EPSILON * c.abs());
        }
    }
    Ok(op)
}
