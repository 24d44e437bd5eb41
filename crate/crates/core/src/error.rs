use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numerical routines and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular to working precision (zero pivot in column {column})")]
    Singular { column: usize },

    /// A resolvent solve hit an exactly singular shifted matrix at sample point `k`.
    #[error("resolvent at sample point k={k} (t={t:e}) is singular")]
    SingularPoint { k: i64, t: f64 },

    #[error("iteration did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("eigenvalue {index} lies on the imaginary axis")]
    ImaginaryAxis { index: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
