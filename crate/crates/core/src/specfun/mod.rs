//! Real-argument special functions used by the lattice-sum continuation
//! formulas.
//!
//! Every routine returns a [`SpecialValue`] carrying an estimate of the
//! absolute truncation and rounding error, so callers can propagate error
//! budgets through longer computations.

mod bessel;
mod gamma;
mod kummer;
mod poly;
mod zeta;

pub use bessel::bessel_k;
pub use gamma::{gamma, ln_gamma, ln_gamma_1p, rgamma};
pub use kummer::{kummer_m, kummer_m_series_tail};
pub use poly::{
    binomial, chebyshev_even_deriv_at_zero, chebyshev_t, factorial, pizetti_p, pochhammer,
};
pub use zeta::{
    beta_minus_quarter_pi, dirichlet_beta, riemann_zeta, zeta_forward, zeta_reflected,
    zeta_regular,
};

pub(crate) use bessel::bessel_k_unchecked;
pub(crate) use zeta::alternating_sum;

/// Machine epsilon shorthand.
pub(crate) const EPS: f64 = f64::EPSILON;

/// Stopping ratio |term / partial sum| shared by the ascending series.
pub(crate) const SERIES_TOL: f64 = 1e-16;

/// A scalar special-function result with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue {
    pub value: f64,
    pub abs_error_bound: f64,
}

impl SpecialValue {
    pub fn new(value: f64, abs_error_bound: f64) -> Self {
        debug_assert!(abs_error_bound.is_finite() && abs_error_bound >= 0.0);
        Self {
            value,
            abs_error_bound,
        }
    }

    pub fn relative_error_bound(&self) -> f64 {
        if self.value == 0.0 {
            self.abs_error_bound
        } else {
            self.abs_error_bound / self.value.abs()
        }
    }

    /// First-order error propagation for a product.
    pub(crate) fn mul(self, other: SpecialValue) -> SpecialValue {
        let value = self.value * other.value;
        let err = self.abs_error_bound * other.value.abs()
            + other.abs_error_bound * self.value.abs()
            + self.abs_error_bound * other.abs_error_bound
            + EPS * value.abs();
        SpecialValue::new(value, err)
    }

    pub(crate) fn scale(self, factor: f64) -> SpecialValue {
        let value = self.value * factor;
        SpecialValue::new(
            value,
            self.abs_error_bound * factor.abs() + EPS * value.abs(),
        )
    }
}
