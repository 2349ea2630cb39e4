use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lattice basis is singular (|det| = {det:e})")]
    SingularBasis { det: f64 },

    #[error("ball of radius {radius} holds about {estimate} points, above the cap of {cap}")]
    BallTooLarge { radius: f64, estimate: u64, cap: u64 },

    #[error("gamma function pole at nonpositive integer {0}")]
    PoleAtNonpositiveInteger(f64),

    #[error("zeta function pole at s = 1")]
    PoleAtOne,

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("Kummer function parameter b = {0} is a nonpositive integer")]
    InvalidB(f64),

    #[error("{what} did not converge within {terms} terms")]
    ConvergenceFailure { what: &'static str, terms: usize },

    #[error("exponent nu = {nu} sits on the pole at nu = {pole}")]
    AtPole { nu: f64, pole: f64 },

    #[error("Gamma(1 - nu/2) has a pole at nu = {nu}")]
    AtGammaPole { nu: f64 },

    #[error("operator order {ell} exceeds the supported maximum {max}")]
    OrderTooHigh { ell: usize, max: usize },

    #[error("order {ell} is below the minimum {min} required here")]
    OrderTooLow { ell: usize, min: usize },

    #[error("field supports derivatives up to order {available}, {needed} needed")]
    InsufficientSmoothness { needed: usize, available: usize },

    #[error("epsilon = {epsilon} must lie in (0, {limit})")]
    EpsilonTooLarge { epsilon: f64, limit: f64 },

    #[error("series with exponent {nu} is not absolutely convergent (needs nu > {required})")]
    NotConvergent { nu: f64, required: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
