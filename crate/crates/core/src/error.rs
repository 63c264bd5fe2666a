use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the landscape toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("first moment curve undefined at z = {z}: combinatorial term {log_count:.6} exceeds ln 2 times {pairs}")]
    CurveUndefined { z: u64, log_count: f64, pairs: f64 },

    #[error("too large for exhaustive search: {what} needs more than {budget} nodes")]
    BudgetExceeded { what: String, budget: u64 },

    #[error("certification requires an exhaustively computed curve")]
    NotCertifiable,

    #[error("malformed graph file (line {line}): {msg}")]
    GraphFormat { line: usize, msg: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
