use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("symbol `{symbol}` evaluation failed at xi = {xi:?}")]
    Evaluation { symbol: String, xi: Vec<f64> },

    /// Two successive quadrature refinements disagree by more than the
    /// allowed multiple of the tolerance.
    #[error("quadrature did not converge: coarse {coarse:e}, fine {fine:e}, tolerance {tolerance:e}")]
    Accuracy { coarse: f64, fine: f64, tolerance: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("container format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
