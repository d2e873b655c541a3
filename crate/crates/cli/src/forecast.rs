//! The `forecast` subcommand: evaluate a saved model at arbitrary times.
//! Writes `reconstruction_re.csv` / `reconstruction_im.csv` in the same
//! layout the fit produced (original spatial coordinates, row means
//! restored), so forecasting at the training grid reproduces the fit's
//! reconstruction files.

use dmd_core::diagnostics::write_complex_csv_pair;
use dmd_core::exact::dynamics;
use dmd_core::snapshots::load_times_csv;
use dmd_core::{DmdError, Result};

use crate::{model, ForecastArgs};

pub fn run(args: ForecastArgs) -> Result<()> {
    let model = model::load(&args.model)?;
    let t = load_times_csv(&args.times)?;

    // Φ · diag(b) · T(ω), then keep the delay-0 block.
    let amplified = dynamics(&model.eigs_continuous, &model.amplitudes, &t);
    let mut recon = (&model.modes * amplified).rows(0, model.n_space).into_owned();
    if let Some(mu) = &model.mean {
        for j in 0..recon.ncols() {
            for i in 0..recon.nrows() {
                recon[(i, j)].re += mu[i];
            }
        }
    }

    std::fs::create_dir_all(&args.out)?;
    let echo = serde_json::json!({
        "command": "forecast",
        "model": args.model,
        "times": args.times,
        "out": args.out,
    });
    let text = serde_json::to_string_pretty(&echo)
        .map_err(|e| DmdError::Format(format!("config echo serialization failed: {e}")))?;
    std::fs::write(args.out.join("run_config.json"), text + "\n")?;
    write_complex_csv_pair(
        &recon,
        &args.out.join("reconstruction_re.csv"),
        &args.out.join("reconstruction_im.csv"),
    )?;
    Ok(())
}
