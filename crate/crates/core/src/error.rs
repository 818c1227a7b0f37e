use std::io;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Geometry or parameter outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),
    /// Caller supplied inconsistent or out-of-range arguments.
    #[error("usage error: {0}")]
    Usage(String),
    /// A serialized artifact could not be decoded.
    #[error("data error: {0}")]
    Data(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}
