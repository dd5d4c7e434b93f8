use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A scheme, channel or experiment configuration is invalid.
    #[error("configuration error: {0}")]
    Config(String),
    /// Bit block does not match what the scheme consumes.
    #[error("encoding error: {0}")]
    Encoding(String),
    /// Exhaustive enumeration would exceed the configured budget.
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Malformed configuration text.
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
