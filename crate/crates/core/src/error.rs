use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid pilot pattern: {0}")]
    InvalidPattern(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("coherence needs at least two columns, got {n_cols}")]
    UndefinedCoherence { n_cols: usize },

    #[error("multiplier {multiplier} is not coprime with {n_total}")]
    InvalidTransform { multiplier: i64, n_total: usize },

    #[error("W W^H deviates from N*I by {deviation:e}; the closed-form pseudo-inverse does not apply")]
    GramIdentity { deviation: f64 },

    #[error("iteration diverged at k={iteration}: residual {residual:e} exceeds 1e3 x initial {initial:e}")]
    Divergence {
        iteration: usize,
        residual: f64,
        initial: f64,
    },

    #[error("interpolation needs at least two pilots, got {n_pilots}")]
    InsufficientPilots { n_pilots: usize },

    #[error("support of size {support} exceeds the {n_pilots} available pilots")]
    SupportTooLarge { support: usize, n_pilots: usize },

    #[error("restricted Gram matrix is singular (condition estimate {condition:e})")]
    SingularSupport { condition: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
