use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Exact enumeration refused because the instance is too large.
    #[error("instance size {n} exceeds the enumeration limit of {max}")]
    SizeLimit { n: usize, max: usize },

    #[error("no Padé approximant is available for m={m}, order={order}")]
    UnsupportedPade { m: u32, order: u32 },

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
