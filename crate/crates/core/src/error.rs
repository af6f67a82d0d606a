use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the models, the simulator and the experiment driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("throughput {throughput} bit/s exceeds router capacity {max} bit/s")]
    OverCapacity { throughput: f64, max: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("infeasible hardware: {0}")]
    Infeasible(String),

    #[error("{0} must be positive")]
    NonPositive(&'static str),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("topology is disconnected: {components} components ({detail})")]
    Disconnected { components: usize, detail: String },

    #[error("model error: {0}")]
    Model(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
