use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    Convergence { sweeps: usize, residual: f64 },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("perplexity calibration failed for point {point}: {message}")]
    Calibration { point: usize, message: String },

    #[error("t-SNE diverged at iteration {iteration} (learning rate {learning_rate})")]
    Divergence { iteration: usize, learning_rate: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("strain is undefined for an all-zero B matrix")]
    UndefinedStrain,

    #[error("margin is undefined for a zero weight vector")]
    UndefinedMargin,

    #[error("config error for `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the CLI: 1 config, 2 data, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidParameter(_) => 1,
            Error::Parse { .. } | Error::InvalidDataset(_) | Error::Io { .. } => 2,
            Error::InvalidInput(_)
            | Error::Convergence { .. }
            | Error::Calibration { .. }
            | Error::Divergence { .. }
            | Error::DegenerateGeometry(_)
            | Error::UndefinedStrain
            | Error::UndefinedMargin => 3,
        }
    }
}
