//! The `datagen` subcommand: write `X.csv` and `t.csv` for a synthetic
//! system, plus the usual `run_config.json` echo. Given equal flags (and
//! seed), two runs produce byte-identical files.

use std::path::Path;

use dmd_core::datagen::{add_noise, linear_system_data, synth_two_tone, TwoToneSpec};
use dmd_core::diagnostics::write_matrix_csv;
use dmd_core::linalg::{RMat, RVec};
use dmd_core::snapshots::{SnapshotMatrix, TimeGrid};
use dmd_core::{DmdError, Result};

use crate::{DatagenCommand, LinearArgs, TwoToneArgs};

/// Parse a matrix literal: rows separated by ';', entries by ','.
fn parse_matrix_literal(text: &str) -> Result<RMat> {
    let rows: Vec<Vec<f64>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|field| {
                    let field = field.trim();
                    field.parse::<f64>().map_err(|_| {
                        DmdError::Config(format!("matrix literal entry '{field}' is not a number"))
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let ncols = rows.first().map_or(0, Vec::len);
    if ncols == 0 {
        return Err(DmdError::Config("matrix literal is empty".into()));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(DmdError::Config(format!(
            "matrix literal rows have unequal lengths in '{text}'"
        )));
    }
    Ok(RMat::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn parse_vector_literal(text: &str) -> Result<RVec> {
    let m = parse_matrix_literal(text)?;
    if m.nrows() != 1 {
        return Err(DmdError::Config(format!(
            "vector literal must be a single comma-separated row, got '{text}'"
        )));
    }
    Ok(RVec::from_iterator(m.ncols(), m.row(0).iter().copied()))
}

fn write_dataset(
    out: &Path,
    x: &SnapshotMatrix,
    t: &TimeGrid,
    sigma: f64,
    seed: u64,
    echo: serde_json::Value,
) -> Result<()> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(DmdError::Config(format!(
            "noise sigma must be a finite value >= 0, got {sigma}"
        )));
    }
    let x = add_noise(x, sigma, seed)?;
    std::fs::create_dir_all(out)?;
    write_matrix_csv(x.values(), &out.join("X.csv"))?;
    let times = RMat::from_fn(t.len(), 1, |i, _| t.times()[i]);
    write_matrix_csv(&times, &out.join("t.csv"))?;
    let text = serde_json::to_string_pretty(&echo)
        .map_err(|e| DmdError::Format(format!("config echo serialization failed: {e}")))?;
    std::fs::write(out.join("run_config.json"), text + "\n")?;
    Ok(())
}

fn run_two_tone(args: TwoToneArgs) -> Result<()> {
    let spec = TwoToneSpec {
        nx: args.nx,
        nt: args.nt,
        omega1: args.omega1,
        omega2: args.omega2,
        ..TwoToneSpec::default()
    };
    let (x, t) = synth_two_tone(&spec)?;
    let echo = serde_json::json!({
        "command": "datagen two-tone",
        "nx": args.nx,
        "nt": args.nt,
        "omega1": args.omega1,
        "omega2": args.omega2,
        "noise_sigma": args.noise_sigma,
        "seed": args.seed,
        "out": args.out,
    });
    write_dataset(&args.out, &x, &t, args.noise_sigma, args.seed, echo)
}

fn run_linear(args: LinearArgs) -> Result<()> {
    let a = parse_matrix_literal(&args.a)?;
    let x0 = parse_vector_literal(&args.x0)?;
    if a.nrows() != a.ncols() {
        return Err(DmdError::Config(format!(
            "system matrix must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if x0.len() != a.nrows() {
        return Err(DmdError::Config(format!(
            "initial state has {} entries but the system is {}x{}",
            x0.len(),
            a.nrows(),
            a.ncols()
        )));
    }
    if args.m < 2 {
        return Err(DmdError::Config(format!(
            "need at least 2 snapshots, got {}",
            args.m
        )));
    }
    if !(args.dt > 0.0 && args.dt.is_finite()) {
        return Err(DmdError::Config(format!(
            "time step must be positive and finite, got {}",
            args.dt
        )));
    }
    let (x, t) = linear_system_data(&a, &x0, args.m, args.dt)?;
    let echo = serde_json::json!({
        "command": "datagen linear",
        "A": args.a,
        "x0": args.x0,
        "m": args.m,
        "dt": args.dt,
        "noise_sigma": args.noise_sigma,
        "seed": args.seed,
        "out": args.out,
    });
    write_dataset(&args.out, &x, &t, args.noise_sigma, args.seed, echo)
}

pub fn run(cmd: DatagenCommand) -> Result<()> {
    match cmd {
        DatagenCommand::TwoTone(args) => run_two_tone(args),
        DatagenCommand::Linear(args) => run_linear(args),
    }
}
