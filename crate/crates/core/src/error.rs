//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The region cannot hold the requested number of antennas at the
    /// required minimum spacing.
    #[error("region cannot hold {count} antennas with min distance {min_distance}: {reason}")]
    InfeasibleRegion {
        count: usize,
        min_distance: f64,
        reason: String,
    },

    /// Every singular value of the channel matrix is zero.
    #[error("channel matrix is identically zero")]
    AllZeroChannel,

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("covariance invariant violated: {0}")]
    CovarianceInvariant(String),

    #[error("solver mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error on {path}: {source}")]
    Serialization {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
