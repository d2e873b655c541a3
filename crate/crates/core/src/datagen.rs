//! Synthetic benchmark systems with known ground truth.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{DmdError, Result};
use crate::linalg::{RMat, RVec};
use crate::snapshots::{SnapshotMatrix, TimeGrid};

/// Two-tone standing-wave benchmark:
/// f(x,t) = sech(x+3)·cos(ω₁t) + 2·sech(x)·tanh(x)·sin(ω₂t).
#[derive(Debug, Clone)]
pub struct TwoToneSpec {
    pub nx: usize,
    pub nt: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub omega1: f64,
    pub omega2: f64,
}

impl Default for TwoToneSpec {
    fn default() -> Self {
        Self {
            nx: 65,
            nt: 129,
            x_min: -5.0,
            x_max: 5.0,
            t_min: 0.0,
            t_max: 4.0 * std::f64::consts::PI,
            omega1: 2.3,
            omega2: 2.8,
        }
    }
}

fn sech(z: f64) -> f64 {
    1.0 / z.cosh()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|k| a + k as f64 * step).collect()
}

/// Evaluate the two-tone signal at a single point.
pub fn two_tone_value(spec: &TwoToneSpec, x: f64, t: f64) -> f64 {
    sech(x + 3.0) * (spec.omega1 * t).cos() + 2.0 * sech(x) * x.tanh() * (spec.omega2 * t).sin()
}

pub fn synth_two_tone(spec: &TwoToneSpec) -> Result<(SnapshotMatrix, TimeGrid)> {
    if spec.nx < 2 || spec.nt < 2 {
        return Err(DmdError::Config("two-tone grids need nx, nt >= 2".into()));
    }
    if spec.x_max <= spec.x_min || spec.t_max <= spec.t_min {
        return Err(DmdError::Config("two-tone grid bounds must be increasing".into()));
    }
    let xs = linspace(spec.x_min, spec.x_max, spec.nx);
    let ts = linspace(spec.t_min, spec.t_max, spec.nt);
    let values = RMat::from_fn(spec.nx, spec.nt, |i, k| two_tone_value(spec, xs[i], ts[k]));
    Ok((SnapshotMatrix::new(values)?, TimeGrid::new(ts)?))
}

/// Spatial grid points used by `synth_two_tone`.
pub fn two_tone_x_grid(spec: &TwoToneSpec) -> Vec<f64> {
    linspace(spec.x_min, spec.x_max, spec.nx)
}

/// Add i.i.d. zero-mean Gaussian noise of standard deviation `sigma` to every
/// entry. ChaCha8 keyed by `seed`, entries drawn in column-major order, so the
/// output is reproducible across platforms. `sigma = 0` returns the input
/// unchanged.
pub fn add_noise(x: &SnapshotMatrix, sigma: f64, seed: u64) -> Result<SnapshotMatrix> {
    if sigma < 0.0 || !sigma.is_finite() {
        return Err(DmdError::Config(format!("noise sigma must be >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(x.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| DmdError::Config(format!("invalid noise distribution: {e}")))?;
    let mut out = x.values().clone();
    for v in out.iter_mut() {
        *v += normal.sample(&mut rng);
    }
    SnapshotMatrix::new(out)
}

/// Snapshots of the discrete linear system x_{k+1} = A·x_k:
/// column k is A^k·x0 with time stamp k·dt, k = 0..m-1.
pub fn linear_system_data(a: &RMat, x0: &RVec, m: usize, dt: f64) -> Result<(SnapshotMatrix, TimeGrid)> {
    if a.nrows() != a.ncols() {
        return Err(DmdError::Shape(format!(
            "system matrix must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if x0.len() != a.nrows() {
        return Err(DmdError::Shape(format!(
            "initial state length {} does not match a {}x{} system",
            x0.len(),
            a.nrows(),
            a.ncols()
        )));
    }
    if m < 2 {
        return Err(DmdError::Config("need at least 2 snapshots".into()));
    }
    let mut values = RMat::zeros(a.nrows(), m);
    let mut state = x0.clone();
    for k in 0..m {
        values.set_column(k, &state);
        if k + 1 < m {
            state = a * state;
        }
    }
    Ok((SnapshotMatrix::new(values)?, TimeGrid::uniform(m, 0.0, dt)?))
}
