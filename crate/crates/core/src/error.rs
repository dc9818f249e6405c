use thiserror::Error;

/// Errors surfaced by the depth engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: bad indices, dimension mismatches, out-of-range
    /// parameters, invalid histograms.
    #[error("invalid input: {0}")]
    Input(String),

    /// The input violates a non-degeneracy precondition (points not in
    /// general position, affinely dependent flat spec, point on a pole).
    #[error("degenerate configuration: {0}")]
    Degeneracy(String),

    /// Random sampling failed to produce a general-position set within the
    /// resampling budget.
    #[error("rejection limit reached: {0}")]
    RejectionLimit(String),

    /// The point-set construction could not complete or failed its
    /// self-validation.
    #[error("realization failed: {0}")]
    RealizationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degeneracy(msg.into())
    }
}
