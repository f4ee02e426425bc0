use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("ill-conditioned matrix (condition number {0:.3e})")]
    Conditioning(f64),
    #[error("cutoff {cutoff} too small: tail mass {tail:.3e}, suggested cutoff {suggested}")]
    CutoffTooSmall {
        cutoff: usize,
        suggested: usize,
        tail: f64,
    },
    #[error("precision: {0}")]
    Precision(String),
    #[error("undefined state: {0}")]
    UndefinedState(String),
    #[error("objective returned a non-finite value at {0}")]
    InvalidFunction(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
