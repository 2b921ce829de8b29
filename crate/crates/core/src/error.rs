use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error)]
pub enum SivfieError {
    #[error("degree {degree} overflows exact integer coefficients ({detail})")]
    DegreeOverflow { degree: usize, detail: String },

    #[error("Gauss-Legendre root {index} of order {order} did not converge")]
    QuadratureNonConvergence { order: usize, index: usize },

    #[error("invalid quadrature order {0}")]
    InvalidQuadratureOrder(usize),

    #[error("dimension mismatch: expected {expected}, got {actual} ({context})")]
    DimensionMismatch {
        expected: usize,
        actual: usize,
        context: &'static str,
    },

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("t = {0} lies outside [0, 1]")]
    OutOfDomain(f64),

    #[error("invalid Brownian grid size {0} (must be a power of two, at least 2)")]
    InvalidGrid(usize),

    #[error("singular system: pivot {pivot:e} at column {column}, condition estimate {condition:e}")]
    SingularSystem { column: usize, pivot: f64, condition: f64 },

    #[error("residual {0:e} exceeds the acceptance threshold")]
    ResidualTooLarge(f64),

    #[error("problem '{0}' has no exact solution")]
    MissingExact(String),

    #[error("trial with seed {seed} failed: {source}")]
    TrialFailed {
        seed: u64,
        #[source]
        source: Box<SivfieError>,
    },

    #[error("need at least two samples, got {0}")]
    TooFewSamples(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

impl SivfieError {
    /// True when the failure is a singular collocation system, possibly
    /// wrapped by a trial failure.
    pub fn is_singular(&self) -> bool {
        match self {
            SivfieError::SingularSystem { .. } => true,
            SivfieError::TrialFailed { source, .. } => source.is_singular(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, SivfieError>;
