//! Persistence of a fitted decomposition. `model.json` holds the scalars and
//! eigenstructure; the (complex) mode matrix lives in a CSV pair referenced
//! by path prefix so the JSON stays readable. Everything a forecast needs to
//! reproduce the fit's reconstruction — original spatial size, delay count,
//! and the subtracted row means — is stored explicitly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use dmd_core::diagnostics::{read_complex_csv_pair, write_complex_csv_pair};
use dmd_core::exact::DmdResult;
use dmd_core::linalg::{C64, CMat, CVec, RVec};
use dmd_core::{DmdError, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct ComplexEntry {
    re: f64,
    im: f64,
}

impl From<C64> for ComplexEntry {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexEntry> for C64 {
    fn from(e: ComplexEntry) -> Self {
        C64::new(e.re, e.im)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    rank: usize,
    /// Fit-grid step; null when the training grid was uneven.
    dt: Option<f64>,
    /// Rows of the original (pre-embedding) snapshots.
    n_space: usize,
    /// Time-delay copies stacked before fitting.
    delays: usize,
    eigs_discrete: Vec<ComplexEntry>,
    eigs_continuous: Vec<ComplexEntry>,
    amplitudes: Vec<ComplexEntry>,
    /// Mode CSV pair prefix, relative to this file's directory.
    modes: String,
    /// Row means subtracted before fitting, if any.
    mean: Option<Vec<f64>>,
}

/// A model read back from disk, ready to evaluate.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub modes: CMat,
    pub eigs_continuous: CVec,
    pub amplitudes: CVec,
    pub n_space: usize,
    pub mean: Option<RVec>,
}

const MODES_PREFIX: &str = "modes";

fn cvec_entries(v: &CVec) -> Vec<ComplexEntry> {
    v.iter().map(|&z| z.into()).collect()
}

fn entries_cvec(e: &[ComplexEntry]) -> CVec {
    CVec::from_iterator(e.len(), e.iter().map(|&x| x.into()))
}

/// Write `model.json` plus the `modes_re.csv`/`modes_im.csv` pair into `dir`.
pub fn save(
    dir: &Path,
    result: &DmdResult,
    n_space: usize,
    delays: usize,
    mean: Option<&RVec>,
) -> Result<()> {
    write_complex_csv_pair(
        &result.modes,
        &dir.join(format!("{MODES_PREFIX}_re.csv")),
        &dir.join(format!("{MODES_PREFIX}_im.csv")),
    )?;
    let file = ModelFile {
        rank: result.rank,
        dt: result.time.uniform_step(),
        n_space,
        delays,
        eigs_discrete: cvec_entries(&result.eigs_discrete),
        eigs_continuous: cvec_entries(&result.eigs_continuous),
        amplitudes: cvec_entries(&result.amplitudes),
        modes: MODES_PREFIX.into(),
        mean: mean.map(|m| m.iter().copied().collect()),
    };
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| DmdError::Format(format!("model serialization failed: {e}")))?;
    std::fs::write(dir.join("model.json"), text + "\n")?;
    Ok(())
}

/// Read a model written by [`save`], validating internal consistency.
pub fn load(path: &Path) -> Result<LoadedModel> {
    let text = std::fs::read_to_string(path)?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| DmdError::Format(format!("{}: {e}", path.display())))?;

    let r = file.rank;
    if file.eigs_continuous.len() != r || file.amplitudes.len() != r || file.eigs_discrete.len() != r
    {
        return Err(DmdError::Shape(format!(
            "model rank {r} does not match {} continuous eigenvalues, {} discrete, {} amplitudes",
            file.eigs_continuous.len(),
            file.eigs_discrete.len(),
            file.amplitudes.len()
        )));
    }
    if file.n_space == 0 || file.delays == 0 {
        return Err(DmdError::Shape(
            "model n_space and delays must be positive".into(),
        ));
    }

    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let modes = read_complex_csv_pair(
        &dir.join(format!("{}_re.csv", file.modes)),
        &dir.join(format!("{}_im.csv", file.modes)),
    )?;
    if modes.ncols() != r {
        return Err(DmdError::Shape(format!(
            "mode matrix has {} columns but the model rank is {r}",
            modes.ncols()
        )));
    }
    if modes.nrows() != file.n_space * file.delays {
        return Err(DmdError::Shape(format!(
            "mode matrix has {} rows but n_space {} with {} delays implies {}",
            modes.nrows(),
            file.n_space,
            file.delays,
            file.n_space * file.delays
        )));
    }
    let mean = match file.mean {
        Some(m) => {
            if m.len() != file.n_space {
                return Err(DmdError::Shape(format!(
                    "mean length {} does not match n_space {}",
                    m.len(),
                    file.n_space
                )));
            }
            Some(RVec::from_iterator(m.len(), m.into_iter()))
        }
        None => None,
    };

    Ok(LoadedModel {
        modes,
        eigs_continuous: entries_cvec(&file.eigs_continuous),
        amplitudes: entries_cvec(&file.amplitudes),
        n_space: file.n_space,
        mean,
    })
}
