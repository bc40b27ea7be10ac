//! Error type shared across the crate.

use crate::initdata::DataKind;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("hermitian symmetry violated at mode {mode}: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    HermitianViolation {
        mode: i64,
        residual: f64,
        tolerance: f64,
    },

    #[error("non-finite value encountered at step {step}")]
    NonFinite { step: u64 },

    #[error("config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("records disagree on snapshot times or missing stored states")]
    SnapshotMismatch,

    #[error("summary is missing column `{0}`")]
    MissingColumn(String),

    #[error("malformed file `{path}`: {reason}")]
    Malformed { path: String, reason: String },

    #[error("run failed for N=2^{k} ({kind:?}): {source}")]
    RunFailed {
        k: u32,
        kind: DataKind,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
