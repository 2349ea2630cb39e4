//! Command implementations behind the `hsem` binary. Each returns a plain
//! report struct; argument parsing and output formatting live in the binary.

mod sweep;

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::epstein::{c_n, epstein_z0_square, InteractionExponent, MomentCache};
use crate::error::{Error, Result};
use crate::hsem::{build_operator_cached, hsem_sum_with, GaussianField};
use crate::oracle::{bernoulli_eval, brute_force_sum};

pub use sweep::{
    fit_slopes, max_errors, run_sweep, write_csv, SlopeFit, SweepConfig, SweepRecord, FLOOR,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SumRequest {
    pub nu: f64,
    pub lambda: f64,
    pub ell: usize,
    pub site: [i64; 2],
    pub h: f64,
    pub tol: f64,
}

impl Default for SumRequest {
    fn default() -> Self {
        Self {
            nu: 2.001,
            lambda: 4.0,
            ell: 2,
            site: [0, 0],
            h: 1.0,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timings {
    pub operator_ms: f64,
    pub hsem_ms: f64,
    pub oracle_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumReport {
    pub nu: f64,
    pub lambda: f64,
    pub ell: usize,
    pub x1: i64,
    pub x2: i64,
    pub h: f64,
    pub hsem_value: f64,
    pub oracle_value: f64,
    pub abs_error: f64,
    pub operator_term: f64,
    pub hadamard_term: f64,
    pub error_bound: f64,
    pub oracle_tail_bound: f64,
    pub timings: Timings,
}

fn millis(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

/// One HSEM evaluation at h * site with a Gaussian of width lambda centred
/// at the origin, next to the brute-force value.
pub fn sum_report(req: &SumRequest) -> Result<SumReport> {
    if !(req.lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {}", req.lambda)));
    }
    let nu = InteractionExponent::new(req.nu)?;
    let field = GaussianField::new(req.lambda);

    let t = Instant::now();
    let op = build_operator_cached(req.ell, nu, req.h, &MomentCache::new())?;
    let operator_ms = millis(t);
    let t = Instant::now();
    let s = hsem_sum_with(&op, &field, req.site)?;
    let hsem_ms = millis(t);

    // sum over h Z^2 equals h^{-nu} times the unit-lattice sum of a Gaussian
    // of width lambda / h
    let t = Instant::now();
    let scale = req.h.powf(-req.nu);
    let unit = GaussianField::new(req.lambda / req.h);
    let oracle = brute_force_sum(req.nu, &unit, req.site, req.tol / scale)?;
    let oracle_ms = millis(t);
    let oracle_value = scale * oracle.value;

    Ok(SumReport {
        nu: req.nu,
        lambda: req.lambda,
        ell: req.ell,
        x1: req.site[0],
        x2: req.site[1],
        h: req.h,
        hsem_value: s.value,
        oracle_value,
        abs_error: (s.value - oracle_value).abs(),
        operator_term: s.operator_term,
        hadamard_term: s.hadamard_term,
        error_bound: s.error_bound,
        oracle_tail_bound: scale * oracle.tail_bound,
        timings: Timings {
            operator_ms,
            hsem_ms,
            oracle_ms,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentRow {
    pub n: usize,
    pub value: f64,
    pub error_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsteinReport {
    pub nu: f64,
    pub z0: f64,
    pub z0_error_bound: f64,
    pub moments: Vec<MomentRow>,
    /// |C_1 - Z_0 / 2|, present when C_1 was requested.
    pub c1_symmetry_residual: Option<f64>,
}

/// Z_0(nu) and the moment sums C_1..C_n(nu) of the square lattice.
pub fn epstein_report(nu: f64, n: usize) -> Result<EpsteinReport> {
    let exponent = InteractionExponent::new(nu)?;
    let z0 = epstein_z0_square(exponent)?;
    let moments = (1..=n)
        .map(|k| {
            c_n(k, exponent).map(|m| MomentRow {
                n: k,
                value: m.value,
                error_bound: m.abs_error_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let c1_symmetry_residual = moments.first().map(|c1| (c1.value - z0.value / 2.0).abs());
    Ok(EpsteinReport {
        nu,
        z0: z0.value,
        z0_error_bound: z0.abs_error_bound,
        moments,
        c1_symmetry_residual,
    })
}

/// Residue of Z_0 at its only pole nu = 2: the area of the unit circle
/// divided by the covolume.
pub const Z0_RESIDUE: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BernoulliRow {
    pub y1: f64,
    pub y2: f64,
    pub value: f64,
}

/// Bernoulli function of Z^2 on a resolution x resolution grid spanning the
/// closed cell [-1/2, 1/2]^2, row-major in y1.
pub fn bernoulli_grid(ell: usize, resolution: usize, radius: f64) -> Result<Vec<BernoulliRow>> {
    if resolution < 2 {
        return Err(Error::Domain(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    let step = 1.0 / (resolution - 1) as f64;
    let coord = |i: usize| -0.5 + i as f64 * step;
    (0..resolution * resolution)
        .into_par_iter()
        .map(|idx| {
            let y = [coord(idx / resolution), coord(idx % resolution)];
            bernoulli_eval(ell, y, radius).map(|b| BernoulliRow {
                y1: y[0],
                y2: y[1],
                value: b.value,
            })
        })
        .collect()
}
