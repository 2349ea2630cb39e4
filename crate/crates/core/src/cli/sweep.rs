//! The convergence experiment: HSEM error against the oracle over a grid of
//! sites, for a list of Gaussian widths and every order up to a maximum.

use rayon::prelude::*;
use serde::Serialize;

use crate::epstein::{InteractionExponent, MomentCache};
use crate::error::Result;
use crate::hsem::{build_operator_cached, hsem_sum_with, GaussianField};
use crate::oracle::brute_force_sum;

/// Errors below this are treated as the double-precision floor.
pub const FLOOR: f64 = 1e-13;

/// One row of the sweep CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub nu: f64,
    pub lambda: f64,
    pub ell: usize,
    pub x1: i64,
    pub x2: i64,
    #[serde(rename = "hsem")]
    pub hsem_value: f64,
    #[serde(rename = "oracle")]
    pub oracle_value: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub nu: f64,
    pub lambdas: Vec<f64>,
    pub ell_max: usize,
    /// Smallest half-width of the square site grid.
    pub grid_extent: i64,
    /// The grid half-width grows as ceil(grid_scale * lambda) once that
    /// exceeds `grid_extent`; errors peak near |x| ~ 2 lambda.
    pub grid_scale: f64,
    /// Tail tolerance handed to the oracle.
    pub oracle_tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            nu: 2.001,
            lambdas: vec![2.0, 4.0, 6.0, 8.0, 10.0],
            ell_max: 3,
            grid_extent: 8,
            grid_scale: 3.0,
            oracle_tol: 1e-16,
        }
    }
}

impl SweepConfig {
    pub fn extent_for(&self, lambda: f64) -> i64 {
        self.grid_extent.max((self.grid_scale * lambda).ceil() as i64)
    }
}

/// Runs the sweep. Rows come back sorted by (lambda, ell, x1, x2) no matter
/// how the work was scheduled.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let nu = InteractionExponent::new(cfg.nu)?;
    let cache = MomentCache::new();
    let full = build_operator_cached(cfg.ell_max, nu, 1.0, &cache)?;
    let operators: Vec<_> = (0..=cfg.ell_max).map(|l| full.truncated(l)).collect();

    let mut work = Vec::new();
    for &lambda in &cfg.lambdas {
        let e = cfg.extent_for(lambda);
        for x1 in -e..=e {
            for x2 in -e..=e {
                work.push((lambda, [x1, x2]));
            }
        }
    }
    let chunks: Vec<Vec<SweepRecord>> = work
        .par_iter()
        .map(|&(lambda, site)| {
            let field = GaussianField::new(lambda);
            let oracle = brute_force_sum(cfg.nu, &field, site, cfg.oracle_tol)?.value;
            operators
                .iter()
                .enumerate()
                .map(|(ell, op)| {
                    let approx = hsem_sum_with(op, &field, site)?.value;
                    Ok(SweepRecord {
                        nu: cfg.nu,
                        lambda,
                        ell,
                        x1: site[0],
                        x2: site[1],
                        hsem_value: approx,
                        oracle_value: oracle,
                        abs_error: (approx - oracle).abs(),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<_> = chunks.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        a.lambda
            .total_cmp(&b.lambda)
            .then(a.ell.cmp(&b.ell))
            .then(a.x1.cmp(&b.x1))
            .then(a.x2.cmp(&b.x2))
    });
    Ok(rows)
}

/// Max-over-grid error for every (ell, lambda) present, ordered by ell then
/// lambda.
pub fn max_errors(rows: &[SweepRecord]) -> Vec<(usize, f64, f64)> {
    let mut out: Vec<(usize, f64, f64)> = Vec::new();
    for r in rows {
        match out.iter_mut().find(|e| e.0 == r.ell && e.1 == r.lambda) {
            Some(e) => e.2 = e.2.max(r.abs_error),
            None => out.push((r.ell, r.lambda, r.abs_error)),
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub ell: usize,
    pub target: f64,
    /// Least-squares slope of log10(max error) against log10(lambda); absent
    /// with fewer than two widths or when the errors hit the floor.
    pub slope: Option<f64>,
    pub floor: bool,
    pub max_errors: Vec<(f64, f64)>,
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn fit_slopes(rows: &[SweepRecord]) -> Vec<SlopeFit> {
    let maxima = max_errors(rows);
    let mut ells: Vec<usize> = maxima.iter().map(|m| m.0).collect();
    ells.dedup();
    ells.into_iter()
        .map(|ell| {
            let max_errors: Vec<(f64, f64)> = maxima
                .iter()
                .filter(|m| m.0 == ell)
                .map(|m| (m.1, m.2))
                .collect();
            let floor = max_errors.iter().any(|m| m.1 < FLOOR);
            let logs: Vec<(f64, f64)> = max_errors
                .iter()
                .map(|&(l, e)| (l.log10(), e.log10()))
                .collect();
            SlopeFit {
                ell,
                target: -2.0 * (ell as f64 + 1.0),
                slope: if floor { None } else { least_squares_slope(&logs) },
                floor,
                max_errors,
            }
        })
        .collect()
}

pub fn write_csv<W: std::io::Write>(rows: &[SweepRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
