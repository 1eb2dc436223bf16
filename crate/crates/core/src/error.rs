use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// A parameter lies outside the validity domain of the operation; the
    /// message names the domain.
    #[error("{0}")]
    InvalidParameter(String),

    #[error("iteration overflow at n={n}: |2^n x| = {magnitude:e} exceeds {limit:e}")]
    Overflow { n: u32, magnitude: f64, limit: f64 },

    #[error("no convergence after {max_n} iterations (last successive error {last_error:e})")]
    NotConverged { max_n: u32, last_error: f64 },

    #[error("empty sequence")]
    EmptySequence,

    #[error("all samples are degenerate: {0}")]
    Degenerate(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
