//! Pipeline-level errors layered over the core modelling errors.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, PipelineError>;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("schema error: {0}")]
    SchemaError(String),

    #[error("unknown country: {0}")]
    UnknownCountry(String),

    #[error("no rows in the requested date range for {country}")]
    EmptyRange { country: String },

    #[error("io error at {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] posrate_core::Error),
}

impl PipelineError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
