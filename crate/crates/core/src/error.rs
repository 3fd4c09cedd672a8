use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the controllers, simulator and harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The lookahead point coincides with the robot position, so the arc
    /// curvature is undefined.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("simulation diverged at step {step} (t = {time:.3} s)")]
    Diverged { step: usize, time: f64 },

    #[error("invalid configuration key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("failed to parse configuration: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("scenario (path {path}, controller {controller}, trial {trial}) failed: {source}")]
    Scenario {
        path: String,
        controller: String,
        trial: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
