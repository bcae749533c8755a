//! Crate-wide error type.
//!
//! Theorem-check failures (gap too small, compression failing, …) are *data*
//! and live in the harness failure taxonomy; `LabError` is reserved for
//! contract violations: bad inputs, configuration mistakes, violated
//! preconditions, and numerical breakdown.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum LabError {
    /// Input outside the operation's domain (invalid site, region mismatch…).
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent or inadmissible configuration values.
    #[error("configuration error: {0}")]
    Config(String),

    /// A stated mathematical precondition does not hold for this input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Requested feature beyond the configured capability (derivative order…).
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// Evaluation at or too close to a spectral singularity.
    #[error("singularity: {0}")]
    Singularity(String),

    /// Ill-conditioned linear-algebra subproblem.
    #[error("conditioning failure: {0}")]
    Conditioning(String),

    /// Resource guard tripped (matrix dimension cap, enumeration bound…).
    #[error("resource guard: {0}")]
    Resource(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
