use thiserror::Error;

/// Errors produced by the library. Display strings start with a stable,
/// machine-parseable name so CLI consumers can grep a single stderr line.
#[derive(Debug, Error)]
pub enum DmdError {
    #[error("ConfigError: {0}")]
    Config(String),

    #[error("FormatError: {0}")]
    Format(String),

    #[error("ParseError: row {row}, col {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error("ValidationError: {0}")]
    Validation(String),

    #[error("ShapeError: {0}")]
    Shape(String),

    #[error("NonUniformTimeError: exact DMD requires evenly spaced samples; use optimized DMD")]
    NonUniformTime,

    #[error("DegenerateDataError: {0}")]
    DegenerateData(String),

    #[error("SingularEigenvalueError: {0}")]
    SingularEigenvalue(String),

    #[error("NumericalError: {0}")]
    Numerical(String),

    #[error("BaggingFailedError: {0}")]
    BaggingFailed(String),

    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DmdError>;

/// Non-fatal conditions. Carried in result types so callers (and tests) can
/// observe them; never printed implicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// Requested rank exceeded the numerical rank and was reduced.
    RankDeficiency { requested: usize, effective: usize },
    /// T(omega) (or a mode basis) had condition number above 1e12; the
    /// minimum-norm least-squares solution was used.
    IllConditionedBasis,
    /// No damping step reduced the residual at the first iteration; the
    /// initial solution was returned.
    Stall,
    /// An eigenvalue with |lambda| < 1e-12 was excluded from the
    /// continuous-time results.
    DegenerateEigenvalue,
    /// Requested summary mode count exceeded the rank and was clamped.
    KClamped { requested: usize, clamped: usize },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::RankDeficiency { requested, effective } => write!(
                f,
                "RankDeficiencyWarning: requested rank {requested} exceeds numerical rank; reduced to {effective}"
            ),
            Warning::IllConditionedBasis => write!(
                f,
                "IllConditionedBasisWarning: basis condition number exceeds 1e12; minimum-norm solution used"
            ),
            Warning::Stall => write!(
                f,
                "StallWarning: no damping step reduced the residual at the first iteration; returning initial solution"
            ),
            Warning::DegenerateEigenvalue => write!(
                f,
                "DegenerateEigenvalueWarning: eigenvalue with |lambda| < 1e-12 excluded from continuous-time results"
            ),
            Warning::KClamped { requested, clamped } => write!(
                f,
                "KClampedWarning: requested {requested} summary modes, clamped to rank {clamped}"
            ),
        }
    }
}
