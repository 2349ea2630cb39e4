// `!(x > 0.0)` is used on purpose so that NaN arguments are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod accum;
pub mod cli;
pub mod epstein;
pub mod error;
pub mod hsem;
pub mod lattice;
pub mod oracle;
pub mod specfun;

pub use error::{Error, Result};
