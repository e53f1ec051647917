use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("quadrature did not converge: estimated error {estimate:.3e} exceeds tolerance {tol:.3e}")]
    QuadratureNonConvergence { estimate: f64, tol: f64 },

    #[error("grid of {requested} points exceeds the limit of {limit}")]
    Resource { requested: usize, limit: usize },

    #[error("solver diverged at step {step} (t = {time})")]
    Divergence { step: usize, time: f64 },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("unknown sweep axis `{0}`")]
    UnknownAxis(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed scenario file: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field: field.to_string(),
        reason: reason.into(),
    }
}
