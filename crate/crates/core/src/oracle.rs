//! Brute-force references: direct lattice sums with certified tail bounds.
//!
//! Tail bounds compare the omitted lattice sum with an integral. For a
//! radially decreasing bound phi on |y| > R every unit cell around y lies
//! outside the disc of radius |y| - s, s = sqrt(2)/2, which gives
//! sum_{|y|>R} phi(|y|) <= 2 pi (1 + s/R') int_{R'}^inf phi(v) v dv, R' = R - 2s.

use std::f64::consts::{PI, SQRT_2};

use crate::accum::Accumulator;
use crate::error::{Error, Result};
use crate::hsem::{GaussianField, SmoothField};
use crate::lattice::{Lattice2, Vec2, DEFAULT_POINT_CAP};
use crate::specfun::{binomial, factorial};

const HALF_DIAGONAL: f64 = SQRT_2 / 2.0;

/// A truncated lattice sum with a certified bound on the omitted part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBoundedSum {
    pub value: f64,
    pub truncation_radius: f64,
    pub tail_bound: f64,
}

/// 2 pi (1 + s/R'): multiplies int_{R'}^inf phi(v) v dv in the tail bounds.
fn cell_factor(radius: f64) -> f64 {
    let inner = radius - 2.0 * HALF_DIAGONAL;
    2.0 * PI * (1.0 + HALF_DIAGONAL / inner)
}

/// Bound on sum_{|y - c| > R, y in Z^2} A e^{-|y-c|^2/w^2} / |y - x|^nu, or
/// None if R is too small for the bound to apply.
fn gaussian_tail(nu: f64, field: &GaussianField, x: Vec2, radius: f64) -> Option<f64> {
    let d = ((x[0] - field.center[0]).powi(2) + (x[1] - field.center[1]).powi(2)).sqrt();
    let inner = radius - 2.0 * HALF_DIAGONAL;
    if inner <= 0.0 || d >= 0.5 * radius {
        return None;
    }
    // |y - x| lies within (1 -+ d/R) |y - c| outside the disc
    let k = if nu >= 0.0 {
        (1.0 - d / radius).powf(-nu)
    } else {
        (1.0 + d / radius).powf(-nu)
    };
    let w2 = field.width * field.width;
    // v^{-nu} e^{-v^2/w^2} must decrease beyond R'
    if nu < 0.0 && inner * inner <= -nu * w2 / 2.0 {
        return None;
    }
    let p = 1.0 - nu;
    let rate = 2.0 * inner / w2 - p.max(0.0) / inner;
    if rate <= 0.0 {
        return None;
    }
    let integral = inner.powf(p) * (-inner * inner / w2).exp() / rate;
    Some(field.amplitude.abs() * k * cell_factor(radius) * integral)
}

/// sum'_{y in Z^2, y != x} g(y) / |y - x|^nu for a Gaussian g, truncated
/// where the certified tail falls below `tol`.
pub fn brute_force_sum(
    nu: f64,
    field: &GaussianField,
    site: [i64; 2],
    tol: f64,
) -> Result<TailBoundedSum> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let x = [site[0] as f64, site[1] as f64];
    let d = ((x[0] - field.center[0]).powi(2) + (x[1] - field.center[1]).powi(2)).sqrt();
    let mut radius = (2.0 * d + 2.0).max(4.0);
    let tail_bound = loop {
        if let Some(b) = gaussian_tail(nu, field, x, radius) {
            if b < tol {
                break b;
            }
        }
        radius *= 1.05;
        let estimate = (PI * radius * radius) as u64;
        if estimate > DEFAULT_POINT_CAP {
            return Err(Error::BallTooLarge {
                radius,
                estimate,
                cap: DEFAULT_POINT_CAP,
            });
        }
    };
    let c = field.center;
    let r2 = radius * radius;
    let mut acc = Accumulator::new();
    let (i0, i1) = ((c[0] - radius).floor() as i64, (c[0] + radius).ceil() as i64);
    let (j0, j1) = ((c[1] - radius).floor() as i64, (c[1] + radius).ceil() as i64);
    for i in i0..=i1 {
        for j in j0..=j1 {
            let y = [i as f64, j as f64];
            if [i, j] == site || (y[0] - c[0]).powi(2) + (y[1] - c[1]).powi(2) > r2 {
                continue;
            }
            let dist_sq = (y[0] - x[0]).powi(2) + (y[1] - x[1]).powi(2);
            acc.add(field.value(y) * dist_sq.powf(-nu / 2.0));
        }
    }
    Ok(TailBoundedSum {
        value: acc.total(),
        truncation_radius: radius,
        tail_bound,
    })
}

/// Bound on sum_{|z|>R} |z|^{-decay} over Z^2, valid for decay > 2.
fn power_tail(decay: f64, radius: f64) -> f64 {
    let inner = radius - 2.0 * HALF_DIAGONAL;
    cell_factor(radius) * inner.powf(2.0 - decay) / (decay - 2.0)
}

/// The same bound for a general lattice with the given cell radius and
/// covolume.
fn power_tail_lattice(decay: f64, radius: f64, lat: &Lattice2) -> f64 {
    let s = lat.cell_radius();
    let inner = radius - 2.0 * s;
    if inner <= 0.0 {
        return f64::INFINITY;
    }
    2.0 * PI * (1.0 + s / inner) * inner.powf(2.0 - decay) / ((decay - 2.0) * lat.covolume)
}

/// Direct sum' z1^{2p} z2^{2q} / |z|^{nu+2p+2q} over the disc |z| <= radius.
pub fn brute_force_moment(p: usize, q: usize, nu: f64, radius: f64) -> Result<TailBoundedSum> {
    if !(nu > 2.5) {
        return Err(Error::NotConvergent { nu, required: 2.5 });
    }
    if !(radius >= 50.0) {
        return Err(Error::Domain(format!("moment radius must be at least 50, got {radius}")));
    }
    let lat = Lattice2::square();
    let estimate = lat.ball_count_estimate(radius);
    if estimate > DEFAULT_POINT_CAP {
        return Err(Error::BallTooLarge {
            radius,
            estimate,
            cap: DEFAULT_POINT_CAP,
        });
    }
    let (ip, iq) = (2 * p as i32, 2 * q as i32);
    let half_exp = -(nu + (ip + iq) as f64) / 2.0;
    let mut acc = Accumulator::new();
    for (m, z) in lat.ball(radius) {
        if m == [0, 0] {
            continue;
        }
        let r2 = z[0] * z[0] + z[1] * z[1];
        acc.add(z[0].powi(ip) * z[1].powi(iq) * r2.powf(half_exp));
    }
    Ok(TailBoundedSum {
        value: acc.total(),
        truncation_radius: radius,
        tail_bound: power_tail(nu, radius),
    })
}

/// Direct evaluation of sum_{k<=order} (1/(2k)!) sum'_{|z|<=radius} <z, grad>^{2k} g(x) / |z|^nu,
/// with the directional derivative expanded over all mixed partials.
pub fn brute_force_operator(
    order: usize,
    nu: f64,
    field: &dyn SmoothField,
    x: Vec2,
    radius: f64,
) -> Result<TailBoundedSum> {
    let required = 2.0 + 2.0 * order as f64 + 0.5;
    if !(nu > required) {
        return Err(Error::NotConvergent { nu, required });
    }
    if field.max_order() < 2 * order {
        return Err(Error::InsufficientSmoothness {
            needed: 2 * order,
            available: field.max_order(),
        });
    }
    // weights[k][j] = binom(2k, j) d1^j d2^{2k-j} g(x) / (2k)!
    let weights: Vec<Vec<f64>> = (0..=order)
        .map(|k| {
            let n = 2 * k;
            (0..=n)
                .map(|j| {
                    binomial(n as u32, j as u32) * field.partial(j, n - j, x)
                        / factorial(n as u32)
                })
                .collect()
        })
        .collect();
    let lat = Lattice2::square();
    let mut acc = Accumulator::new();
    let mut pow1 = vec![0.0; 2 * order + 1];
    let mut pow2 = vec![0.0; 2 * order + 1];
    for (m, z) in lat.ball(radius) {
        if m == [0, 0] {
            continue;
        }
        pow1[0] = 1.0;
        pow2[0] = 1.0;
        for j in 1..=2 * order {
            pow1[j] = pow1[j - 1] * z[0];
            pow2[j] = pow2[j - 1] * z[1];
        }
        let mut directional = 0.0;
        for (k, w) in weights.iter().enumerate() {
            let n = 2 * k;
            for (j, wj) in w.iter().enumerate() {
                directional += wj * pow1[j] * pow2[n - j];
            }
        }
        let r2 = z[0] * z[0] + z[1] * z[1];
        acc.add(directional * r2.powf(-nu / 2.0));
    }
    let tail_bound = weights
        .iter()
        .enumerate()
        .map(|(k, w)| {
            let bound: f64 = w.iter().map(|v| v.abs()).sum();
            bound * power_tail(nu - 2.0 * k as f64, radius)
        })
        .sum();
    Ok(TailBoundedSum {
        value: acc.total(),
        truncation_radius: radius,
        tail_bound,
    })
}

/// A truncated Fourier-series value of the lattice Bernoulli function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliEval {
    pub ell: usize,
    pub point: Vec2,
    pub value: f64,
    pub truncation_radius: f64,
    pub tail_bound: f64,
}

/// Bernoulli function of a lattice,
/// (1/V) sum'_{z in dual} e^{2 pi i <z, y>} / (2 pi i |z|)^{2(ell+1)},
/// summed as a cosine series over the dual lattice.
pub fn bernoulli_eval_lattice(
    lat: &Lattice2,
    ell: usize,
    y: Vec2,
    radius: f64,
) -> Result<BernoulliEval> {
    if ell < 1 {
        return Err(Error::OrderTooLow { ell, min: 1 });
    }
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    let dual = lat.dual();
    let estimate = dual.ball_count_estimate(radius);
    if estimate > DEFAULT_POINT_CAP {
        return Err(Error::BallTooLarge {
            radius,
            estimate,
            cap: DEFAULT_POINT_CAP,
        });
    }
    let power = 2 * (ell as i32 + 1);
    let sign = if (ell + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    // reduce the phase in lattice coordinates so periodicity and evenness
    // survive rounding: <z, y> = sum_j m_j <d_j, y> for z = sum_j m_j d_j
    let d = lat.dual_basis;
    let coords = [
        y[0] * d[0][0] + y[1] * d[0][1],
        y[0] * d[1][0] + y[1] * d[1][1],
    ];
    let reduced = coords.map(|c| c - c.round());
    let mut acc = Accumulator::new();
    for (m, z) in dual.ball(radius) {
        if m == [0, 0] {
            continue;
        }
        let phase = m[0] as f64 * reduced[0] + m[1] as f64 * reduced[1];
        let r = (z[0] * z[0] + z[1] * z[1]).sqrt();
        acc.add((2.0 * PI * phase).cos() / (2.0 * PI * r).powi(power));
    }
    let tail = power_tail_lattice(power as f64, radius, &dual) / (2.0 * PI).powi(power);
    Ok(BernoulliEval {
        ell,
        point: y,
        value: sign * acc.total() / lat.covolume,
        truncation_radius: radius,
        tail_bound: tail / lat.covolume,
    })
}

/// Bernoulli function of Z^2 (self-dual, unit covolume).
pub fn bernoulli_eval(ell: usize, y: Vec2, radius: f64) -> Result<BernoulliEval> {
    bernoulli_eval_lattice(&Lattice2::square(), ell, y, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epstein::{epstein_z0_square, InteractionExponent};
    use crate::hsem::{apply_operator, build_operator};
    use crate::lattice::make_lattice;

    #[test]
    fn narrow_gaussian_is_dominated_by_the_origin() {
        let g = GaussianField::new(0.1);
        let s = brute_force_sum(2.001, &g, [5, 5], 1e-15).unwrap();
        let expected = 50f64.powf(-2.001 / 2.0);
        assert!((s.value - expected).abs() < 1e-15);
        assert!((s.value - 0.0199).abs() < 1e-4);
    }

    #[test]
    fn zero_field_sums_to_zero() {
        let s = brute_force_sum(2.001, &GaussianField::zero(), [0, 0], 1e-10).unwrap();
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn flat_interaction_is_a_theta_square() {
        let g = GaussianField::new(2.0);
        let s = brute_force_sum(0.0, &g, [0, 0], 1e-15).unwrap();
        let theta: f64 = (-40..=40).map(|n: i32| (-(n * n) as f64 / 4.0).exp()).sum();
        assert!((s.value - (theta * theta - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn tail_bound_is_sound() {
        // deterministic pseudo-random configurations
        let mut state = 0x2545_f491_4f6c_dd1d_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let w = 1.0 + 5.0 * next();
            let nu = -1.0 + 5.0 * next();
            let site = [(8.0 * next()) as i64 - 4, (8.0 * next()) as i64 - 4];
            let g = GaussianField::new(w);
            let s = brute_force_sum(nu, &g, site, 1e-6).unwrap();
            // recompute on twice the radius by hand
            let big = 2.0 * s.truncation_radius;
            let mut acc = Accumulator::new();
            let n = big.ceil() as i64;
            for i in -n..=n {
                for j in -n..=n {
                    let y = [i as f64, j as f64];
                    if [i, j] == site || y[0] * y[0] + y[1] * y[1] > big * big {
                        continue;
                    }
                    let d2 = (y[0] - site[0] as f64).powi(2) + (y[1] - site[1] as f64).powi(2);
                    acc.add(g.value(y) * d2.powf(-nu / 2.0));
                }
            }
            let change = (acc.total() - s.value).abs();
            assert!(change <= s.tail_bound + 1e-14 * s.value.abs(), "w {w} nu {nu} {site:?}");
        }
    }

    #[test]
    fn tail_bound_shrinks_with_radius() {
        let g = GaussianField::new(3.0);
        let mut last = f64::INFINITY;
        for r in [12.0, 16.0, 20.0, 30.0] {
            let b = gaussian_tail(2.001, &g, [1.0, 2.0], r).unwrap();
            assert!(b < last);
            last = b;
        }
    }

    #[test]
    fn moment_oracle_reproduces_epstein_values() {
        let z0 = epstein_z0_square(InteractionExponent::new(5.0).unwrap()).unwrap().value;
        let m = brute_force_moment(0, 0, 5.0, 2000.0).unwrap();
        assert!((m.value - z0).abs() <= m.tail_bound + 1e-12);
        let c1 = brute_force_moment(1, 0, 5.0, 300.0).unwrap();
        assert!((c1.value - z0 / 2.0).abs() <= c1.tail_bound + 1e-12);
        let s11 = brute_force_moment(1, 1, 5.0, 300.0).unwrap();
        assert!((s11.value - 0.214_549_067_072_118_4).abs() <= s11.tail_bound + 1e-12);
    }

    #[test]
    fn moment_oracle_is_symmetric() {
        for (p, q) in [(1, 0), (2, 1), (3, 1)] {
            let a = brute_force_moment(p, q, 4.0, 60.0).unwrap();
            let b = brute_force_moment(q, p, 4.0, 60.0).unwrap();
            assert!((a.value - b.value).abs() <= 1e-15 * a.value.abs());
        }
    }

    #[test]
    fn moment_oracle_preconditions() {
        assert_eq!(
            brute_force_moment(0, 0, 2.4, 100.0),
            Err(Error::NotConvergent { nu: 2.4, required: 2.5 })
        );
        assert!(matches!(brute_force_moment(0, 0, 5.0, 10.0), Err(Error::Domain(_))));
    }

    #[test]
    fn operator_oracle_matches_expansion() {
        let nu = InteractionExponent::new(8.0).unwrap();
        let g = GaussianField::new(3.0);
        let op = build_operator(2, nu, 1.0).unwrap();
        let fast = apply_operator(&op, &g, [1.0, 1.0]).unwrap();
        let slow = brute_force_operator(2, 8.0, &g, [1.0, 1.0], 1200.0).unwrap();
        assert!((fast - slow.value).abs() < 1e-8, "{fast} vs {}", slow.value);
        assert!((fast - slow.value).abs() <= slow.tail_bound);
    }

    #[test]
    fn operator_oracle_zeroth_order() {
        let g = GaussianField::new(2.0);
        let x = [0.5, -0.2];
        let a = brute_force_operator(0, 5.0, &g, x, 200.0).unwrap().value;
        let b = brute_force_moment(0, 0, 5.0, 200.0).unwrap().value * g.value(x);
        assert!((a - b).abs() < 1e-14 * b.abs());
        assert!(matches!(
            brute_force_operator(2, 6.0, &g, x, 200.0),
            Err(Error::NotConvergent { .. })
        ));
    }

    #[test]
    fn bernoulli_peak_is_the_dual_zeta_value() {
        let b = bernoulli_eval(1, [0.0, 0.0], 400.0).unwrap();
        let z4 = epstein_z0_square(InteractionExponent::new(4.0).unwrap()).unwrap().value;
        assert!((b.value - z4 / (2.0 * PI).powi(4)).abs() <= b.tail_bound);
        assert!((b.value - 0.003_866_946_590_737_210_03).abs() <= b.tail_bound);
        assert!(b.tail_bound < 1e-7);
        let corner = bernoulli_eval(1, [0.5, 0.5], 400.0).unwrap();
        assert!(corner.value.abs() < b.value.abs());
        // ell = 2 carries the opposite sign
        assert!(bernoulli_eval(2, [0.0, 0.0], 100.0).unwrap().value < 0.0);
        assert_eq!(bernoulli_eval(0, [0.1, 0.2], 10.0), Err(Error::OrderTooLow { ell: 0, min: 1 }));
    }

    #[test]
    fn bernoulli_is_periodic_and_even() {
        for y in [[0.1, 0.2], [0.37, -0.41], [-0.25, 0.05]] {
            let a = bernoulli_eval(1, y, 60.0).unwrap().value;
            let shifted = bernoulli_eval(1, [y[0] + 1.0, y[1]], 60.0).unwrap().value;
            let mirrored = bernoulli_eval(1, [-y[0], -y[1]], 60.0).unwrap().value;
            assert!((a - shifted).abs() < 1e-13);
            assert_eq!(a, mirrored);
        }
    }

    #[test]
    fn bernoulli_on_a_scaled_lattice() {
        // B for 2 Z^2 at 2y equals B for Z^2 at y scaled by 2^{2(ell+1)} / 4
        let lat = make_lattice([[2.0, 0.0], [0.0, 2.0]]).unwrap();
        let y = [0.3, 0.1];
        let a = bernoulli_eval_lattice(&lat, 1, [0.6, 0.2], 80.0).unwrap().value;
        let b = bernoulli_eval(1, y, 160.0).unwrap().value;
        assert!((a - b * 16.0 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn bernoulli_norm_approaches_kissing_count() {
        let v = bernoulli_eval(10, [0.0, 0.0], 20.0).unwrap().value;
        let scaled = (2.0 * PI).powi(22) * v.abs();
        assert!((scaled - 4.0).abs() < 4e-3);
    }
}
