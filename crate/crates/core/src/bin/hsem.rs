use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hsem::cli::{self, SumRequest, SweepConfig, Z0_RESIDUE};

/// Singular lattice sums on Z^2 by the hypersingular Euler-Maclaurin expansion.
#[derive(Parser)]
#[command(name = "hsem", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one sum with the expansion and with the brute-force oracle.
    Sum {
        #[arg(long, default_value_t = 2.001, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, default_value_t = 4.0)]
        lambda: f64,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        /// Lattice site as i,j (x = h * (i, j)).
        #[arg(long, default_value = "0,0", value_parser = parse_site, allow_hyphen_values = true)]
        x: [i64; 2],
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        /// Tail tolerance for the oracle.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Error-scaling sweep over Gaussian widths; CSV rows plus fitted slopes.
    Convergence {
        #[arg(long, default_value_t = 2.001, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10")]
        lambdas: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        ell_max: usize,
        /// Minimum half-width of the site grid.
        #[arg(long, default_value_t = 8)]
        grid_extent: i64,
        /// The grid half-width is at least ceil(grid_scale * lambda); 0 keeps it fixed.
        #[arg(long, default_value_t = 3.0)]
        grid_scale: f64,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Epstein zeta Z_0 and the moment sums C_1..C_n of Z^2.
    Epstein {
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Bernoulli function of Z^2 on a grid over [-1/2, 1/2]^2.
    Bernoulli {
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 33)]
        resolution: usize,
        /// Truncation radius of the Fourier series.
        #[arg(long, default_value_t = 100.0)]
        radius: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_site(s: &str) -> Result<[i64; 2], String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected i,j, got `{s}`"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|e| format!("bad coordinate `{t}`: {e}"))
    };
    Ok([parse(a)?, parse(b)?])
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Args::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn open_output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_rows<T: Serialize>(rows: &[T], out: impl Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SumRow {
    nu: f64,
    lambda: f64,
    ell: usize,
    x1: i64,
    x2: i64,
    h: f64,
    hsem_value: f64,
    oracle_value: f64,
    abs_error: f64,
    operator_term: f64,
    hadamard_term: f64,
    error_bound: f64,
}

#[derive(Serialize)]
struct EpsteinRow {
    n: usize,
    value: f64,
    error_bound: f64,
}

fn run(args: Args) -> anyhow::Result<()> {
    match args.command {
        Command::Sum {
            nu,
            lambda,
            ell,
            x,
            h,
            tol,
            format,
        } => {
            let r = cli::sum_report(&SumRequest {
                nu,
                lambda,
                ell,
                site: x,
                h,
                tol,
            })?;
            match format {
                Format::Json => print_json(&r)?,
                Format::Csv => {
                    let row = SumRow {
                        nu: r.nu,
                        lambda: r.lambda,
                        ell: r.ell,
                        x1: r.x1,
                        x2: r.x2,
                        h: r.h,
                        hsem_value: r.hsem_value,
                        oracle_value: r.oracle_value,
                        abs_error: r.abs_error,
                        operator_term: r.operator_term,
                        hadamard_term: r.hadamard_term,
                        error_bound: r.error_bound,
                    };
                    write_rows(&[row], io::stdout().lock())?;
                }
            }
        }
        Command::Convergence {
            nu,
            lambdas,
            ell_max,
            grid_extent,
            grid_scale,
            out,
        } => {
            if lambdas.is_empty() {
                usage_error("--lambdas needs at least one value");
            }
            let cfg = SweepConfig {
                nu,
                lambdas,
                ell_max,
                grid_extent,
                grid_scale,
                ..SweepConfig::default()
            };
            let rows = cli::run_sweep(&cfg)?;
            let mut sink = open_output(&out)?;
            cli::write_csv(&rows, &mut sink)?;
            sink.flush()?;
            let table = slope_table(&cli::fit_slopes(&rows));
            if out.is_some() {
                print!("{table}");
            } else {
                eprint!("{table}");
            }
        }
        Command::Epstein { nu, n, format } => {
            let r = match cli::epstein_report(nu, n) {
                Err(hsem::Error::AtPole { nu, pole }) => {
                    return Err(hsem::Error::AtPole { nu, pole }).with_context(|| {
                        format!(
                            "Z_0 has a simple pole at nu = {pole} with residue 2 pi = {Z0_RESIDUE}"
                        )
                    })
                }
                other => other?,
            };
            match format {
                Format::Json => print_json(&r)?,
                Format::Csv => {
                    let mut rows = vec![EpsteinRow {
                        n: 0,
                        value: r.z0,
                        error_bound: r.z0_error_bound,
                    }];
                    rows.extend(r.moments.iter().map(|m| EpsteinRow {
                        n: m.n,
                        value: m.value,
                        error_bound: m.error_bound,
                    }));
                    write_rows(&rows, io::stdout().lock())?;
                }
            }
        }
        Command::Bernoulli {
            ell,
            resolution,
            radius,
            out,
        } => {
            if ell == 0 {
                usage_error(
                    "--ell must be at least 1: the order-0 series is not absolutely convergent on Z^2",
                );
            }
            if resolution < 2 {
                usage_error("--resolution must be at least 2");
            }
            let rows = cli::bernoulli_grid(ell, resolution, radius)?;
            let mut sink = open_output(&out)?;
            write_rows(&rows, &mut sink)?;
            sink.flush()?;
        }
    }
    Ok(())
}

fn slope_table(fits: &[cli::SlopeFit]) -> String {
    let mut s = String::from("ell  target  slope     max_error_at_largest_lambda\n");
    for f in fits {
        let slope = match (f.floor, f.slope) {
            (true, _) => "floor".to_string(),
            (false, Some(v)) => format!("{v:.3}"),
            (false, None) => String::new(),
        };
        let last = f.max_errors.last().map_or(f64::NAN, |m| m.1);
        s += &format!("{:<4} {:<7} {:<9} {:.3e}\n", f.ell, f.target, slope, last);
    }
    s
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<hsem::Error>() {
            return 3;
        }
        if cause.is::<io::Error>() || cause.is::<csv::Error>() || cause.is::<serde_json::Error>() {
            return 4;
        }
    }
    1
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hsem: error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
