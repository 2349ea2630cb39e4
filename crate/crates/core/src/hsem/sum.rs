use std::f64::consts::PI;

use crate::epstein::{z0_regular, InteractionExponent, MomentCache, POLE_TOL};
use crate::error::{Error, Result};
use crate::lattice::Vec2;
use crate::specfun::{gamma, kummer_m, kummer_m_series_tail, ln_gamma_1p};

use super::field::{GaussianField, SmoothField};
use super::operator::{apply_operator, build_operator_cached, HsemOperator};

/// Exponents closer to 2 than this use the cancellation-free evaluation of
/// the zeroth-order term plus the finite-part integral.
const NEAR_POLE: f64 = 0.5;

fn check_gamma_pole(nu: f64) -> Result<()> {
    let half = nu / 2.0;
    let k = half.round();
    if k >= 1.0 && (half - k).abs() <= POLE_TOL {
        Err(Error::AtGammaPole { nu })
    } else {
        Ok(())
    }
}

/// Finite-part integral of exp(-|y|^2 / width^2) / |x - y|^nu over the plane:
/// pi Gamma(1 - nu/2) width^{2-nu} M(nu/2, 1, -|x|^2 / width^2).
pub fn hadamard_gaussian(nu: f64, width: f64, x: Vec2) -> Result<f64> {
    check_gamma_pole(nu)?;
    if !(width > 0.0) {
        return Err(Error::Domain(format!("Gaussian width must be positive, got {width}")));
    }
    let t = (x[0] * x[0] + x[1] * x[1]) / (width * width);
    let g = gamma(1.0 - nu / 2.0)?;
    let m = kummer_m(nu / 2.0, 1.0, -t)?;
    Ok(PI * g.value * width.powf(2.0 - nu) * m.value)
}

/// Result of one O(1) evaluation of a singular lattice sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsemSum {
    pub value: f64,
    pub operator_term: f64,
    pub hadamard_term: f64,
    /// Estimated floating-point error of `value`; the truncation remainder
    /// of the expansion is not included.
    pub error_bound: f64,
}

/// Approximates sum'_{y in hZ^2} g(y) / |y - x|^nu at x = h * site by the
/// local operator of the given order plus the finite-part integral per
/// unit covolume.
pub fn hsem_sum(
    order: usize,
    nu: InteractionExponent,
    field: &GaussianField,
    site: [i64; 2],
    h: f64,
) -> Result<HsemSum> {
    check_gamma_pole(nu.nu())?;
    let op = build_operator_cached(order, nu, h, &MomentCache::new())?;
    hsem_sum_with(&op, field, site)
}

/// Same as [`hsem_sum`] with a prebuilt operator.
pub fn hsem_sum_with(op: &HsemOperator, field: &GaussianField, site: [i64; 2]) -> Result<HsemSum> {
    let nu = op.nu().nu();
    check_gamma_pole(nu)?;
    let h = op.spacing();
    let x = [h * site[0] as f64, h * site[1] as f64];
    let rel = [x[0] - field.center[0], x[1] - field.center[1]];
    let operator_term = apply_operator(op, field, x)?;
    let hadamard_term = field.amplitude * hadamard_gaussian(nu, field.width, rel)? / (h * h);

    let mut error_bound = 0.0;
    for (p, q, _) in op.terms() {
        let e = op.coeff_error(p, q).unwrap_or(0.0);
        error_bound += e * field.partial(2 * p, 2 * q, x).abs();
    }
    let eps = nu - 2.0;
    let value = if eps.abs() < NEAR_POLE {
        let higher: f64 = op
            .terms()
            .skip(1)
            .map(|(p, q, c)| c * field.partial(2 * p, 2 * q, x))
            .sum();
        let lowest = near_pole_lowest_order(nu, h, field, x)?;
        error_bound += 8.0 * f64::EPSILON * (higher.abs() + lowest.abs());
        higher + lowest
    } else {
        error_bound += 4.0 * f64::EPSILON * (operator_term.abs() + hadamard_term.abs());
        operator_term + hadamard_term
    };
    Ok(HsemSum {
        value,
        operator_term,
        hadamard_term,
        error_bound,
    })
}

/// Zeroth-order operator term plus finite-part integral for nu = 2 + eps.
///
/// Both pieces carry a 2 pi / eps pole of opposite sign. With
/// Z0 = 2 pi / eps + Zreg and Gamma(-eps/2) = -(2/eps) Gamma(1 - eps/2) the
/// sum becomes A e^{-t} [Zreg h^{-nu} + (2 pi / (eps h^2)) bracket] where
/// bracket = expm1(-eps ln h) - a - (1 + a) m1,
/// a = Gamma(1 - eps/2) width^{-eps} - 1 and m1 = M(-eps/2, 1, t) - 1,
/// after the Kummer transformation M(1 + eps/2, 1, -t) = e^{-t} M(-eps/2, 1, t).
/// Each of a and m1 is O(eps) and computed without cancellation.
fn near_pole_lowest_order(nu: f64, h: f64, field: &GaussianField, x: Vec2) -> Result<f64> {
    let eps = nu - 2.0;
    let t = field.scaled_distance_sq(x);
    let reg = z0_regular(nu)?;
    let a = (ln_gamma_1p(-eps / 2.0)? - eps * field.width.ln()).exp_m1();
    let m1 = kummer_m_series_tail(-eps / 2.0, 1.0, t)?.value;
    let bracket = (-eps * h.ln()).exp_m1() - a - (1.0 + a) * m1;
    let inner = reg.value * h.powf(-nu) + 2.0 * PI / (eps * h * h) * bracket;
    Ok(field.amplitude * (-t).exp() * inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epstein::epstein_z0_square;
    use crate::hsem::build_operator;
    use crate::oracle::brute_force_sum;

    fn nu(x: f64) -> InteractionExponent {
        InteractionExponent::new(x).unwrap()
    }

    #[test]
    fn hadamard_at_center() {
        for (x, w) in [(1.0, 3.0), (2.001, 10.0), (3.0, 2.0), (-1.0, 1.5)] {
            let got = hadamard_gaussian(x, w, [0.0, 0.0]).unwrap();
            let expected = PI * gamma(1.0 - x / 2.0).unwrap().value * w.powf(2.0 - x);
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn hadamard_without_interaction_is_gaussian_mass() {
        let w = 2.5;
        let got = hadamard_gaussian(0.0, w, [0.7, -0.3]).unwrap();
        assert!((got - PI * w * w).abs() < 1e-13);
    }

    #[test]
    fn hadamard_reference_value() {
        // pi Gamma(1/2) 3 M(1/2, 1, -5/9)
        let got = hadamard_gaussian(1.0, 3.0, [2.0, 1.0]).unwrap();
        assert!((got - 12.898_708_958_395_415_18).abs() < 1e-12);
    }

    #[test]
    fn hadamard_gamma_poles() {
        assert_eq!(hadamard_gaussian(4.0, 1.0, [0.0, 0.0]), Err(Error::AtGammaPole { nu: 4.0 }));
        assert_eq!(hadamard_gaussian(2.0, 1.0, [0.0, 0.0]), Err(Error::AtGammaPole { nu: 2.0 }));
        assert!(hadamard_gaussian(0.0, 1.0, [0.0, 0.0]).is_ok());
    }

    #[test]
    fn zeroth_order_composition() {
        let (x, w) = (2.001, 10.0);
        let g = GaussianField::new(w);
        let s = hsem_sum(0, nu(x), &g, [0, 0], 1.0).unwrap();
        let z0 = epstein_z0_square(nu(x)).unwrap().value;
        let had = PI * gamma(1.0 - x / 2.0).unwrap().value * w.powf(2.0 - x);
        assert!((s.value - (z0 + had)).abs() < 1e-9);
        assert_eq!(s.operator_term, z0);
        let oracle = brute_force_sum(x, &g, [0, 0], 1e-14).unwrap().value;
        assert!((s.value - oracle).abs() < 1e-2 * oracle.abs());
    }

    #[test]
    fn near_pole_path_matches_direct_sum_of_terms() {
        for (x, w, site) in [(2.001, 4.0, [1, 2]), (2.3, 3.0, [0, 0]), (1.8, 6.0, [5, -3])] {
            let g = GaussianField::new(w).with_amplitude(1.7);
            for h in [1.0, 0.5] {
                let s = hsem_sum(3, nu(x), &g, site, h).unwrap();
                let naive = s.operator_term + s.hadamard_term;
                let scale = s.operator_term.abs() + s.hadamard_term.abs();
                assert!((s.value - naive).abs() < 1e-13 * scale, "nu {x} h {h}");
            }
        }
    }

    #[test]
    fn spacing_covariance() {
        // sum over h Z^2 with width h w at h x equals h^{-nu} times the unit case
        for x in [1.0, 2.001, 3.3] {
            let unit = hsem_sum(3, nu(x), &GaussianField::new(3.0), [2, -1], 1.0).unwrap();
            for h in [0.5, 2.0] {
                let scaled = hsem_sum(3, nu(x), &GaussianField::new(3.0 * h), [2, -1], h).unwrap();
                let expected = h.powf(-x) * unit.value;
                assert!((scaled.value - expected).abs() < 1e-12 * expected.abs(), "nu {x} h {h}");
            }
        }
    }

    #[test]
    fn error_decreases_with_width() {
        let x = nu(2.001);
        let op = build_operator(1, x, 1.0).unwrap();
        let mut last = f64::INFINITY;
        for w in [2.0, 4.0, 8.0] {
            let g = GaussianField::new(w);
            let approx = hsem_sum_with(&op, &g, [1, 0]).unwrap().value;
            let exact = brute_force_sum(2.001, &g, [1, 0], 1e-15).unwrap().value;
            let err = (approx - exact).abs();
            assert!(err < last, "width {w}");
            last = err;
        }
    }

    #[test]
    fn zero_field_gives_zero() {
        let s = hsem_sum(2, nu(1.5), &GaussianField::zero(), [0, 0], 1.0).unwrap();
        assert_eq!(s.value, 0.0);
    }
}
