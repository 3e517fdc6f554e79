use alloc::string::String;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed or mismatched input data.
    #[error("input error: {0}")]
    Input(String),
    /// A computation needs a simplicial level beyond the stored truncation.
    #[error("resource error: {what} needs level {required} but truncation is {available}")]
    Truncation {
        what: String,
        required: usize,
        available: usize,
    },
    /// A configured size bound was exceeded.
    #[error("resource error: {0}")]
    Resource(String),
    /// Data that is well-formed but fails a required law.
    #[error("validation error: {0}")]
    Validation(String),
    /// A check that can only fail if this crate has a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! input_err {
    ($($arg:tt)*) => { $crate::error::Error::Input(alloc::format!($($arg)*)) };
}
macro_rules! validation_err {
    ($($arg:tt)*) => { $crate::error::Error::Validation(alloc::format!($($arg)*)) };
}
macro_rules! internal_err {
    ($($arg:tt)*) => { $crate::error::Error::Internal(alloc::format!($($arg)*)) };
}

pub(crate) use input_err;
pub(crate) use internal_err;
pub(crate) use validation_err;
