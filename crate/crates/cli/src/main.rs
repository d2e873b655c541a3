//! `dmd` — dynamic mode decomposition from the command line.
//!
//! Subcommands: `fit` (decompose a snapshot CSV and write summary artifacts),
//! `datagen` (synthetic benchmark systems), `forecast` (evaluate a fitted
//! model at new times). Every run echoes its resolved parameters to
//! `run_config.json` in the output directory so results can be reproduced
//! byte for byte.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data/validation error,
//! 4 numerical failure. Failures print a single `error: <reason>` line to
//! stderr.

mod config;
mod datagen;
mod fit;
mod forecast;
mod model;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dmd_core::DmdError;

#[derive(Debug, Parser)]
#[command(
    name = "dmd",
    version,
    about = "Dynamic mode decomposition: fit, synthesize benchmark data, forecast",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a decomposition to a snapshot CSV and write summary artifacts.
    Fit(Box<FitArgs>),
    /// Generate a synthetic data set (X.csv and t.csv).
    #[command(subcommand)]
    Datagen(DatagenCommand),
    /// Evaluate a fitted model at new times.
    Forecast(ForecastArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// JSON config file (same schema as the run_config.json echo); explicit
    /// flags take precedence over file values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Fitting method: exact, optdmd, or bopdmd.
    #[arg(long)]
    pub method: Option<String>,
    /// Rank: positive integer, fraction in (0,1) or "energy:F" (energy
    /// capture), "full", or "auto" (default).
    #[arg(long)]
    pub rank: Option<String>,
    /// Time-delay copies to stack before fitting (1 = no embedding).
    #[arg(long)]
    pub delays: Option<usize>,
    /// Subtract each row's temporal mean before fitting; the mean is stored
    /// in the model and restored in reconstructions.
    #[arg(long)]
    pub center: bool,
    /// Transpose the input on load (for files laid out time × space).
    #[arg(long)]
    pub transpose: bool,
    /// Snapshot CSV: rows = space, columns = time; '#' starts a comment.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// One-column CSV of strictly increasing time stamps.
    #[arg(long, conflicts_with = "dt")]
    pub times: Option<PathBuf>,
    /// Uniform sampling step; the grid starts at t = 0.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Bagging trials (bopdmd).
    #[arg(long)]
    pub num_trials: Option<usize>,
    /// Snapshots per trial: fraction in (0,1] or an integer count (bopdmd).
    #[arg(long)]
    pub trial_size: Option<f64>,
    /// Comma-separated eigenvalue constraints: imag, conjugate_pairs, stable
    /// (bopdmd).
    #[arg(long, value_delimiter = ',')]
    pub constraints: Option<Vec<String>>,
    /// Relative residual-improvement tolerance of the iterative solver.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration cap for the iterative solver.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Seed for the bagging subsample draws.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for bagging trials (default: all cores). Results do
    /// not depend on this value.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Per-iteration solver progress on stderr.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum DatagenCommand {
    /// Two-frequency standing-wave benchmark (65×129 by default).
    TwoTone(TwoToneArgs),
    /// Discrete linear system x_{k+1} = A·x_k sampled from x0.
    Linear(LinearArgs),
}

#[derive(Debug, Args)]
pub struct TwoToneArgs {
    /// Spatial grid points on [-5, 5].
    #[arg(long, default_value_t = 65)]
    pub nx: usize,
    /// Time samples on [0, 4π].
    #[arg(long, default_value_t = 129)]
    pub nt: usize,
    /// First angular frequency.
    #[arg(long, default_value_t = 2.3)]
    pub omega1: f64,
    /// Second angular frequency.
    #[arg(long, default_value_t = 2.8)]
    pub omega2: f64,
    /// Standard deviation of additive Gaussian noise (0 = clean).
    #[arg(long, default_value_t = 0.0)]
    pub noise_sigma: f64,
    /// Noise seed; equal seeds give byte-identical files.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LinearArgs {
    /// System matrix literal: rows separated by ';', entries by ','.
    #[arg(long = "A")]
    pub a: String,
    /// Initial state: comma-separated entries.
    #[arg(long)]
    pub x0: String,
    /// Number of snapshots to iterate.
    #[arg(long)]
    pub m: usize,
    /// Time step attached to the snapshots.
    #[arg(long)]
    pub dt: f64,
    /// Standard deviation of additive Gaussian noise (0 = clean).
    #[arg(long, default_value_t = 0.0)]
    pub noise_sigma: f64,
    /// Noise seed; equal seeds give byte-identical files.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ForecastArgs {
    /// model.json written by a previous fit.
    #[arg(long)]
    pub model: PathBuf,
    /// One-column CSV of times to evaluate.
    #[arg(long)]
    pub times: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

/// Exit code for each error class; the partition is part of the interface.
fn exit_code(err: &DmdError) -> u8 {
    match err {
        DmdError::Config(_) => 2,
        DmdError::Format(_)
        | DmdError::Parse { .. }
        | DmdError::Validation(_)
        | DmdError::Shape(_)
        | DmdError::NonUniformTime
        | DmdError::Io(_) => 3,
        DmdError::DegenerateData(_)
        | DmdError::SingularEigenvalue(_)
        | DmdError::Numerical(_)
        | DmdError::BaggingFailed(_) => 4,
    }
}

fn run(cli: Cli) -> dmd_core::Result<()> {
    match cli.command {
        Command::Fit(args) => fit::run(*args),
        Command::Datagen(cmd) => datagen::run(cmd),
        Command::Forecast(args) => forecast::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
