//! The `fit` subcommand: load → (transpose) → (center) → delay-embed →
//! fit → summarize → write artifacts.
//!
//! Artifacts written to the output directory:
//! `run_config.json` (resolved-parameter echo, reloadable via `--config`),
//! `summary.json`, `summary.svg`, `modes_re/_im.csv` (embedded-space modes),
//! `model.json`, `dynamics_re/_im.csv`, `reconstruction_re/_im.csv`
//! (original coordinates, row means restored), `times.csv` (fit grid), and
//! for bagged fits `bag_stats.json`.

use std::path::Path;

use dmd_core::bopdmd::{fit_bop, BagStatistics};
use dmd_core::diagnostics::{
    build_summary, emit_svg, write_complex_csv_pair, write_matrix_csv, write_summary_json,
};
use dmd_core::exact::{fit_exact, reconstruct, DmdResult};
use dmd_core::linalg::{CMat, CVec, RMat, RVec};
use dmd_core::snapshots::{
    center, hankel_embed, load_csv, load_times_csv, truncate_times, HankelConfig, SnapshotMatrix,
    TimeGrid,
};
use dmd_core::varpro::fit_optimized;
use dmd_core::{DmdError, Result};

use crate::config::{Method, RunConfig};
use crate::{model, FitArgs};

/// Add back the row means that were subtracted before fitting.
fn restore_mean(recon: &mut CMat, mean: &RVec) {
    for j in 0..recon.ncols() {
        for i in 0..recon.nrows() {
            recon[(i, j)].re += mean[i];
        }
    }
}

fn column_matrix(values: &[f64]) -> RMat {
    RMat::from_fn(values.len(), 1, |i, _| values[i])
}

fn complex_entries(v: &CVec) -> serde_json::Value {
    serde_json::Value::Array(
        v.iter()
            .map(|z| serde_json::json!({"re": z.re, "im": z.im}))
            .collect(),
    )
}

fn write_bag_stats(path: &Path, num_trials: usize, stats: &BagStatistics) -> Result<()> {
    let value = serde_json::json!({
        "num_trials": num_trials,
        "trials_converged": stats.trials_converged,
        "omega_mean": complex_entries(&stats.omega_mean),
        "omega_std": complex_entries(&stats.omega_std),
        "amplitude_mean": complex_entries(&stats.amplitude_mean),
        "amplitude_std": complex_entries(&stats.amplitude_std),
    });
    let text = serde_json::to_string_pretty(&value)
        .map_err(|e| DmdError::Format(format!("bag statistics serialization failed: {e}")))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

fn load_time_base(cfg: &RunConfig, n_time: usize) -> Result<TimeGrid> {
    match (&cfg.times, cfg.dt) {
        (Some(path), None) => {
            let t = load_times_csv(path)?;
            if t.len() != n_time {
                return Err(DmdError::Shape(format!(
                    "time file has {} stamps but the snapshots have {} columns",
                    t.len(),
                    n_time
                )));
            }
            Ok(t)
        }
        (None, Some(dt)) => TimeGrid::uniform(n_time, 0.0, dt),
        // RunConfig::resolve guarantees exactly one source.
        _ => unreachable!("time base validated at resolution"),
    }
}

pub fn run(args: FitArgs) -> Result<()> {
    let cfg = RunConfig::resolve(args)?;
    if let Some(n) = cfg.threads {
        // Only fails if a global pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    if !cfg.constraints.is_empty() && cfg.method != Method::Bopdmd {
        eprintln!("warning: eigenvalue constraints are used only by bopdmd; ignored");
    }

    let mut x = load_csv(&cfg.input)?;
    if cfg.transpose {
        x = SnapshotMatrix::new(x.values().transpose())?;
    }
    let t_full = load_time_base(&cfg, x.n_time())?;

    let (x, mean) = if cfg.center {
        let (centered, mu) = center(&x);
        (centered, Some(mu))
    } else {
        (x, None)
    };

    let hankel = HankelConfig::new(cfg.delays)?;
    let xe = hankel_embed(&x, &hankel)?;
    let te = truncate_times(&t_full, &hankel)?;

    let mut bag_stats: Option<BagStatistics> = None;
    let result: DmdResult = match cfg.method {
        Method::Exact => fit_exact(&xe, &te, &cfg.rank)?,
        Method::Optdmd => fit_optimized(&xe, &te, &cfg.rank, &cfg.varpro_options())?,
        Method::Bopdmd => {
            let (result, stats) = fit_bop(&xe, &te, &cfg.rank, &cfg.bop_config()?)?;
            bag_stats = Some(stats);
            result
        }
    };

    let (bundle, summary_warnings) = build_summary(&result, &x, Some(&hankel), None)?;
    for w in result.warnings.iter().chain(summary_warnings.iter()) {
        eprintln!("warning: {w}");
    }

    std::fs::create_dir_all(&cfg.out)?;
    let out = cfg.out.as_path();
    let echo = serde_json::to_string_pretty(&cfg.echo())
        .map_err(|e| DmdError::Format(format!("config echo serialization failed: {e}")))?;
    std::fs::write(out.join("run_config.json"), echo + "\n")?;

    write_summary_json(&bundle, &out.join("summary.json"))?;
    emit_svg(&bundle, &out.join("summary.svg"))?;
    model::save(out, &result, x.n_space(), cfg.delays, mean.as_ref())?;
    write_complex_csv_pair(
        &bundle.dynamics,
        &out.join("dynamics_re.csv"),
        &out.join("dynamics_im.csv"),
    )?;

    let mut recon = reconstruct(&result, &te).rows(0, x.n_space()).into_owned();
    if let Some(mu) = &mean {
        restore_mean(&mut recon, mu);
    }
    write_complex_csv_pair(
        &recon,
        &out.join("reconstruction_re.csv"),
        &out.join("reconstruction_im.csv"),
    )?;
    write_matrix_csv(&column_matrix(te.times()), &out.join("times.csv"))?;

    if let Some(stats) = &bag_stats {
        write_bag_stats(&out.join("bag_stats.json"), cfg.num_trials, stats)?;
    }

    if cfg.verbose {
        eprintln!(
            "fit: method={} rank={} of {} columns; artifacts in {}",
            cfg.method,
            result.rank,
            xe.n_time(),
            out.display()
        );
    }
    Ok(())
}
