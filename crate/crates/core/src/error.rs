use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Every variant maps to a stable machine-readable [`Error::code`] and to one
/// of two failure classes: input validation or numerical failure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("inadmissible boost: {0}")]
    InadmissibleBoost(String),

    #[error("evanescent mode: |k| = {kmag} does not exceed alpha = {alpha}")]
    Evanescent { kmag: f64, alpha: f64 },

    #[error("singular polarization prefactor: alpha + i(u.k) vanishes")]
    SingularPrefactor,

    #[error("degenerate polarization: n lies in the span of k and u")]
    DegenerateBasis,

    #[error("path is not closed: endpoint mismatch {0:e}")]
    NonClosedPath(f64),

    #[error("wave vector is not commensurate with the periodic domain: {0}")]
    Incommensurate(String),

    #[error("CFL violation: dt = {dt} exceeds the limit {limit}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("grid shape mismatch: expected {expected} samples, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("feature not enabled: {0}")]
    FeatureDisabled(&'static str),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier used in CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::InadmissibleBoost(_) => "inadmissible_boost",
            Error::Evanescent { .. } => "evanescent_mode",
            Error::SingularPrefactor => "singular_prefactor",
            Error::DegenerateBasis => "degenerate_basis",
            Error::NonClosedPath(_) => "non_closed_path",
            Error::Incommensurate(_) => "incommensurate_wave_vector",
            Error::CflViolation { .. } => "cfl_violation",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::FeatureDisabled(_) => "feature_disabled",
            Error::Numerical(_) => "numerical_failure",
            Error::Io(_) => "io_failure",
        }
    }

    /// True for failures that occur while computing rather than while validating input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::CflViolation { .. } | Error::Numerical(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
