//! Dynamic mode decomposition toolkit.
//!
//! Decomposes snapshot data X (space × time) into spatial modes Φ, complex
//! continuous-time eigenvalues ω, and amplitudes b such that
//! X ≈ Φ·diag(b)·T(ω) with T(ω)_{jk} = exp(ω_j·t_k). Three fitting routes:
//!
//! - [`exact::fit_exact`]: classic exact DMD via a truncated SVD of the
//!   shifted snapshot matrices; uniform sampling required.
//! - [`varpro::solve_varpro`]: optimized DMD — direct nonlinear least squares
//!   by variable projection with Levenberg–Marquardt; handles uneven grids.
//! - [`bopdmd::fit_bop`]: bagging of optimized DMD over random column
//!   subsamples with eigenvalue constraints and uncertainty estimates.
//!
//! Time convention: reconstruction and forecasting evaluate exp(ω·t) at the
//! literal time stamps, and amplitudes are fit to the first snapshot, so the
//! factorization reproduces the data when the training grid starts at t = 0.

pub mod bopdmd;
pub mod datagen;
pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod snapshots;
pub mod varpro;

pub use error::{DmdError, Result, Warning};
pub use exact::{DmdResult, RankSpec, ReducedOperator};
pub use snapshots::{HankelConfig, SnapshotMatrix, TimeGrid};
