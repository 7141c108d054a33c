use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by all solver components.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameter or inconsistent setup detected before running.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed text input (reference datasets, config files).
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// Structurally valid input that violates a documented constraint.
    #[error("validation error in {path}: {msg}")]
    Validation { path: String, msg: String },

    /// Argument outside the mathematical domain of an analytic solution.
    #[error("coordinate {value} outside [0, {max}]")]
    Domain { value: f64, max: f64 },

    /// Non-finite or nonpositive density produced by a time step.
    #[error("solver diverged at step {step}, node {node}: {reason}")]
    Diverged {
        step: u64,
        node: usize,
        reason: String,
    },

    /// A distribution vector with zero total mass has no velocity.
    #[error("degenerate density: distribution sums to zero")]
    DegenerateDensity,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
