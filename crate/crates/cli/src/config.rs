//! Resolution of fit parameters from flags, an optional JSON config file,
//! and defaults — in that precedence order. The resolved configuration is
//! echoed to `run_config.json` in the same schema the file loader accepts,
//! so any run can be repeated with `--config <echo>`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use dmd_core::bopdmd::{BopConfig, EigConstraint, TrialSize};
use dmd_core::varpro::VarproOptions;
use dmd_core::{DmdError, RankSpec, Result};

use crate::FitArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Optdmd,
    Bopdmd,
}

impl FromStr for Method {
    type Err = DmdError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Method::Exact),
            "optdmd" => Ok(Method::Optdmd),
            "bopdmd" => Ok(Method::Bopdmd),
            other => Err(DmdError::Config(format!(
                "unknown method '{other}' (expected exact, optdmd, or bopdmd)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Exact => write!(f, "exact"),
            Method::Optdmd => write!(f, "optdmd"),
            Method::Bopdmd => write!(f, "bopdmd"),
        }
    }
}

/// Rank grammar: "auto" | "full" | positive integer | fraction in (0,1) |
/// "energy:F".
pub fn parse_rank(s: &str) -> Result<RankSpec> {
    let t = s.trim();
    match t {
        "auto" => return Ok(RankSpec::Auto),
        "full" => return Ok(RankSpec::Full),
        _ => {}
    }
    if let Some(rest) = t.strip_prefix("energy:") {
        let f: f64 = rest
            .parse()
            .map_err(|_| DmdError::Config(format!("invalid energy fraction '{rest}'")))?;
        return Ok(RankSpec::Energy(f));
    }
    if let Ok(n) = t.parse::<usize>() {
        if n >= 1 {
            return Ok(RankSpec::Exact(n));
        }
    }
    if let Ok(f) = t.parse::<f64>() {
        if f > 0.0 && f < 1.0 {
            return Ok(RankSpec::Energy(f));
        }
    }
    Err(DmdError::Config(format!(
        "invalid rank '{t}' (expected a positive integer, a fraction in (0,1), 'energy:F', 'full', or 'auto')"
    )))
}

pub fn rank_to_string(rank: &RankSpec) -> String {
    match rank {
        RankSpec::Exact(n) => n.to_string(),
        RankSpec::Energy(f) => format!("energy:{f}"),
        RankSpec::Full => "full".into(),
        RankSpec::Auto => "auto".into(),
    }
}

/// A value in (0, 1] is a fraction of the snapshot count; an integral value
/// of 2 or more is an absolute column count.
pub fn parse_trial_size(v: f64) -> Result<TrialSize> {
    if v > 0.0 && v <= 1.0 {
        return Ok(TrialSize::Fraction(v));
    }
    if v.fract() == 0.0 && v >= 2.0 && v.is_finite() {
        return Ok(TrialSize::Count(v as usize));
    }
    Err(DmdError::Config(format!(
        "invalid trial size {v} (expected a fraction in (0,1] or an integer count >= 2)"
    )))
}

pub fn parse_constraints(names: &[String]) -> Result<Vec<EigConstraint>> {
    names
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<EigConstraint>())
        .collect()
}

/// On-disk config schema; also the echo schema. Every field is optional so
/// a file can carry just the values it wants to pin.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub method: Option<String>,
    #[serde(default)]
    pub rank: Option<String>,
    #[serde(default)]
    pub delays: Option<usize>,
    #[serde(default)]
    pub center: Option<bool>,
    #[serde(default)]
    pub transpose: Option<bool>,
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub times: Option<PathBuf>,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub num_trials: Option<usize>,
    #[serde(default)]
    pub trial_size: Option<f64>,
    #[serde(default)]
    pub constraints: Option<Vec<String>>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub verbose: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| DmdError::Config(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved fit parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub method: Method,
    pub rank: RankSpec,
    pub delays: usize,
    pub center: bool,
    pub transpose: bool,
    pub input: PathBuf,
    pub times: Option<PathBuf>,
    pub dt: Option<f64>,
    pub out: PathBuf,
    pub num_trials: usize,
    pub trial_size: f64,
    pub constraints: Vec<EigConstraint>,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub verbose: bool,
}

impl RunConfig {
    /// Merge flags over the optional config file over defaults, then
    /// validate cross-field requirements.
    pub fn resolve(args: FitArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };

        let method: Method = args
            .method
            .or(file.method)
            .ok_or_else(|| DmdError::Config("missing --method (exact, optdmd, or bopdmd)".into()))?
            .parse()?;
        let rank = parse_rank(args.rank.or(file.rank).as_deref().unwrap_or("auto"))?;
        let delays = args.delays.or(file.delays).unwrap_or(1);
        if delays < 1 {
            return Err(DmdError::Config("delay count must be at least 1".into()));
        }
        let center = args.center || file.center.unwrap_or(false);
        let transpose = args.transpose || file.transpose.unwrap_or(false);
        let input = args
            .input
            .or(file.input)
            .ok_or_else(|| DmdError::Config("missing --input snapshot CSV".into()))?;
        let out = args
            .out
            .or(file.out)
            .ok_or_else(|| DmdError::Config("missing --out output directory".into()))?;

        // The time base resolves as a unit: flags replace the file's pair
        // rather than mixing with it.
        let (times, dt) = if args.times.is_some() || args.dt.is_some() {
            (args.times, args.dt)
        } else {
            (file.times, file.dt)
        };
        match (&times, dt) {
            (Some(_), Some(_)) => {
                return Err(DmdError::Config("give either times or dt, not both".into()))
            }
            (None, None) => {
                return Err(DmdError::Config(
                    "missing time base: give --times FILE or --dt STEP".into(),
                ))
            }
            (None, Some(step)) => {
                if !(step > 0.0 && step.is_finite()) {
                    return Err(DmdError::Config(format!(
                        "time step must be positive and finite, got {step}"
                    )));
                }
            }
            (Some(_), None) => {}
        }

        let num_trials = args.num_trials.or(file.num_trials).unwrap_or(100);
        let trial_size = args.trial_size.or(file.trial_size).unwrap_or(0.8);
        parse_trial_size(trial_size)?;
        let constraint_names = args.constraints.or(file.constraints).unwrap_or_default();
        let constraints = parse_constraints(&constraint_names)?;
        let tol = args.tol.or(file.tol).unwrap_or(1e-6);
        let max_iter = args.max_iter.or(file.max_iter).unwrap_or(30);
        let seed = args.seed.or(file.seed).unwrap_or(0);
        let threads = args.threads.or(file.threads);
        if threads == Some(0) {
            return Err(DmdError::Config("thread count must be at least 1".into()));
        }
        let verbose = args.verbose || file.verbose.unwrap_or(false);

        Ok(Self {
            method,
            rank,
            delays,
            center,
            transpose,
            input,
            times,
            dt,
            out,
            num_trials,
            trial_size,
            constraints,
            tol,
            max_iter,
            seed,
            threads,
            verbose,
        })
    }

    pub fn varpro_options(&self) -> VarproOptions {
        VarproOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            verbose: self.verbose,
            ..VarproOptions::default()
        }
    }

    pub fn bop_config(&self) -> Result<BopConfig> {
        Ok(BopConfig {
            num_trials: self.num_trials,
            trial_size: parse_trial_size(self.trial_size)?,
            eig_constraints: self.constraints.clone(),
            seed: self.seed,
            varpro: self.varpro_options(),
        })
    }

    /// Echo in the same schema `--config` accepts.
    pub fn echo(&self) -> FileConfig {
        FileConfig {
            method: Some(self.method.to_string()),
            rank: Some(rank_to_string(&self.rank)),
            delays: Some(self.delays),
            center: Some(self.center),
            transpose: Some(self.transpose),
            input: Some(self.input.clone()),
            times: self.times.clone(),
            dt: self.dt,
            out: Some(self.out.clone()),
            num_trials: Some(self.num_trials),
            trial_size: Some(self.trial_size),
            constraints: Some(self.constraints.iter().map(|c| c.to_string()).collect()),
            tol: Some(self.tol),
            max_iter: Some(self.max_iter),
            seed: Some(self.seed),
            threads: self.threads,
            verbose: Some(self.verbose),
        }
    }
}
