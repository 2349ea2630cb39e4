//! The hypersingular Euler-Maclaurin expansion on the lattice h Z^2: a local
//! differential operator with continued moment-sum coefficients, plus the
//! finite-part integral of the summand.

mod field;
mod operator;
mod sum;

pub use field::{hermite, GaussianField, SmoothField};
pub use operator::{
    angular_coefficient, apply_operator, build_operator, build_operator_cached,
    build_operator_solid_harmonic, sem_epsilon_operator, HsemOperator, MAX_ORDER,
};
pub use sum::{hadamard_gaussian, hsem_sum, hsem_sum_with, HsemSum};
