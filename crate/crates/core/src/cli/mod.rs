//! Command-line front end.

mod config;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

pub use config::{
    build, parse_config, parse_config_str, to_config, write_config, ChainConfig,
    CommensurableConfig, Config, EdgeConfig,
};
pub use report::{
    analyze, methods_disagree, to_json, AnalysisReport, ModalSpectra, ModelSummary, ReportStatus,
};

use crate::criteria::{sync_check_spectral_with, weak_coupling_bound, Synchronizes, Tolerances};
use crate::error::{Error, Result};
use crate::model::{normalize, ArraySystem};
use crate::simulate::{counterexample_ic, default_dt, integrate, random_initial_condition};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_DISCREPANCY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "oscnet",
    version,
    about = "Synchronization analysis of coupled linear oscillators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every synchronization check and write a JSON report.
    Analyze {
        config: PathBuf,
        /// Relative imaginary-axis tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the array and write a CSV trace.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long = "t-final")]
        t_final: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start from a non-synchronizing mode instead of a random state.
        #[arg(long)]
        counterexample: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the weak-coupling radius and write it as JSON.
    Bound {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the spectral verdict on an epsilon grid and write CSV.
    Sweep {
        config: PathBuf,
        #[arg(long = "eps-min")]
        eps_min: f64,
        #[arg(long = "eps-max")]
        eps_max: f64,
        #[arg(long = "eps-steps")]
        eps_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NumericalFailure(_) => EXIT_NUMERICAL,
        _ => EXIT_INVALID,
    }
}

fn load(path: &Path) -> Result<ArraySystem> {
    let (model, graph) = parse_config(path)?;
    normalize(&model, &graph)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Grid of `steps` evenly spaced values from `lo` to `hi` inclusive.
pub fn epsilon_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi < lo {
        return Err(Error::InvalidInput(format!(
            "need 0 <= eps-min <= eps-max and eps-steps >= 1, got {lo}, {hi}, {steps}"
        )));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k == steps - 1 {
                hi
            } else {
                lo + k as f64 * h
            }
        })
        .collect())
}

/// CSV rows `epsilon,margin,verdict,imaginary_axis_count`, ordered by epsilon.
pub fn sweep_csv(sys: &ArraySystem, grid: &[f64], tol: &Tolerances) -> Result<String> {
    let rows: Vec<Result<String>> = grid
        .par_iter()
        .map(|&eps| {
            let v = sync_check_spectral_with(sys, eps, tol)?;
            let margin = v.margin.map_or(String::new(), |m| format!("{m:.16e}"));
            let verdict = match v.synchronizes {
                Synchronizes::Yes => "yes",
                Synchronizes::No => "no",
                Synchronizes::Indeterminate => "indeterminate",
            };
            Ok(format!(
                "{eps:.16e},{margin},{verdict},{}",
                v.imaginary_axis_count
            ))
        })
        .collect();
    let mut out = String::from("epsilon,margin,verdict,imaginary_axis_count\n");
    for r in rows {
        out.push_str(&r?);
        out.push('\n');
    }
    Ok(out)
}

/// CSV trace for the `simulate` command.
pub fn simulate_csv(
    sys: &ArraySystem,
    dt: Option<f64>,
    t_final: Option<f64>,
    seed: u64,
    counterexample: bool,
) -> Result<Vec<u8>> {
    let epsilon = sys.graph().epsilon();
    let dt = match dt {
        Some(dt) => dt,
        None => default_dt(sys, epsilon)?,
    };
    let (z0, v0, seed, horizon) = if counterexample {
        let mode = counterexample_ic(sys, epsilon)?.ok_or_else(|| {
            Error::Unsupported("the array synchronizes, so there is no counterexample mode".into())
        })?;
        let d = mode.xi.len();
        (mode.xi, vec![0.0; d], None, 5.0 * mode.period)
    } else {
        let (z, v) = random_initial_condition(sys.dim(), seed);
        let slowest = 2.0 * std::f64::consts::PI / sys.sigma()[0].sqrt();
        (z, v, Some(seed), 10.0 * slowest)
    };
    let mut trace = integrate(sys, epsilon, &z0, &v0, dt, t_final.unwrap_or(horizon))?;
    trace.seed = seed;
    let mut buf = Vec::new();
    trace.write_csv(&mut buf)?;
    Ok(buf)
}

fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Analyze { config, tol, out } => {
            let sys = load(config)?;
            let mut t = Tolerances::default();
            if let Some(x) = tol {
                if !(x.is_finite() && *x > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "--tol must be positive, got {x}"
                    )));
                }
                t.axis = *x;
            }
            let report = analyze(&sys, &t)?;
            emit(out.as_deref(), to_json(&report).as_bytes())?;
            Ok(if report.status == ReportStatus::Discrepancy {
                eprintln!("error: spectral and subspace methods disagree");
                EXIT_DISCREPANCY
            } else {
                EXIT_OK
            })
        }
        Command::Simulate {
            config,
            dt,
            t_final,
            seed,
            counterexample,
            out,
        } => {
            let sys = load(config)?;
            let csv = simulate_csv(&sys, *dt, *t_final, *seed, *counterexample)?;
            emit(out.as_deref(), &csv)?;
            Ok(EXIT_OK)
        }
        Command::Bound { config, out } => {
            let sys = load(config)?;
            let bound = weak_coupling_bound(&sys)?;
            emit(out.as_deref(), to_json(&bound).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            config,
            eps_min,
            eps_max,
            eps_steps,
            out,
        } => {
            let sys = load(config)?;
            let grid = epsilon_grid(*eps_min, *eps_max, *eps_steps)?;
            let csv = sweep_csv(&sys, &grid, &Tolerances::default())?;
            emit(out.as_deref(), csv.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs a parsed command line, reporting errors on stderr.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
