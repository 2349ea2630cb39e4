use super::{SpecialValue, EPS, SERIES_TOL};
use crate::error::{Error, Result};

/// Term cap for the ascending series. At |z| = 200 the terms peak near
/// k = 200 and need roughly 350 terms to fall below tolerance.
const MAX_TERMS: usize = 600;

fn check_b(b: f64) -> Result<()> {
    if b <= 0.0 && b == b.round() {
        Err(Error::InvalidB(b))
    } else {
        Ok(())
    }
}

/// sum_{k >= first} (a)_k z^k / ((b)_k k!), with the sum of absolute terms.
fn ascending(a: f64, b: f64, z: f64, first: usize) -> Result<(f64, f64)> {
    let mut term: f64 = 1.0;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for k in 0..MAX_TERMS {
        if k >= first {
            sum += term;
            abs_sum += term.abs();
        }
        let kf = k as f64;
        let ratio = (a + kf) / ((b + kf) * (kf + 1.0)) * z;
        let next = term * ratio;
        if next == 0.0 {
            return Ok((sum, abs_sum));
        }
        if k >= first && ratio.abs() < 1.0 && next.abs() <= SERIES_TOL * sum.abs() * 1e-1 {
            return Ok((sum, abs_sum));
        }
        term = next;
    }
    Err(Error::ConvergenceFailure {
        what: "Kummer series",
        terms: MAX_TERMS,
    })
}

/// Kummer's confluent hypergeometric function M(a, b, z) for z <= 0.
///
/// Evaluated as e^z M(b - a, b, -z), whose ascending series has terms of a
/// single sign once k exceeds a - b, so no cancellation builds up.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<SpecialValue> {
    check_b(b)?;
    if !(z <= 0.0) {
        return Err(Error::Domain(format!("kummer_m needs z <= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(SpecialValue::new(1.0, 0.0));
    }
    let (series, abs_sum) = ascending(b - a, b, -z, 0)?;
    let scale = z.exp();
    let value = scale * series;
    let err = scale * (8.0 + (-z).sqrt()) * EPS * abs_sum + EPS * value.abs();
    Ok(SpecialValue::new(value, err))
}

/// M(a, b, z) - 1 = sum_{k>=1} (a)_k z^k / ((b)_k k!), summed without
/// forming the leading 1. Useful when a is tiny and M is close to 1.
pub fn kummer_m_series_tail(a: f64, b: f64, z: f64) -> Result<SpecialValue> {
    check_b(b)?;
    if z == 0.0 || a == 0.0 {
        return Ok(SpecialValue::new(0.0, 0.0));
    }
    let (series, abs_sum) = ascending(a, b, z, 1)?;
    Ok(SpecialValue::new(series, 8.0 * EPS * abs_sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        assert_eq!(kummer_m(0.3, 1.7, 0.0).unwrap().value, 1.0);
        for z in [-0.5, -3.0, -20.0, -150.0] {
            let m = kummer_m(1.0, 1.0, z).unwrap().value;
            assert!(((m - z.exp()) / z.exp()).abs() < 1e-14, "z = {z}");
        }
    }

    #[test]
    fn invalid_b_and_domain() {
        assert_eq!(kummer_m(1.0, -2.0, -1.0), Err(Error::InvalidB(-2.0)));
        assert_eq!(kummer_m(1.0, 0.0, -1.0), Err(Error::InvalidB(0.0)));
        assert!(matches!(kummer_m(1.0, 1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn large_argument_asymptotics() {
        // M(a, b, -t) ~ Gamma(b) / Gamma(b - a) t^{-a} for t -> inf
        let (a, b, t) = (0.75, 1.0, 200.0);
        let m = kummer_m(a, b, -t).unwrap().value;
        let g = crate::specfun::gamma(b - a).unwrap().value;
        let leading = t.powf(-a) / g;
        // next correction is O(1/t)
        assert!(((m - leading) / leading).abs() < 5e-3);
    }

    #[test]
    fn tail_plus_one_is_m() {
        for (a, b, z) in [(-0.0005, 1.0, 3.0), (0.4, 1.3, 0.7), (-1.7, 1.0, 12.0)] {
            let tail = kummer_m_series_tail(a, b, z).unwrap().value;
            let (full, _) = ascending(a, b, z, 0).unwrap();
            assert!((1.0 + tail - full).abs() < 1e-14 * full.abs().max(1.0));
        }
    }
}
