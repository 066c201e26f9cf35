use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failures raised by the metric and linear-algebra layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input data.
    Input(String),
    /// Two vectors (or a vector and a table) disagree on dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// A vector that must be normalized has zero (or non-finite) norm.
    ZeroVector,
    /// No embedding is available for the given normalized sentence.
    MissingEmbedding(String),
    /// A video has captions but no references.
    MissingReferences(String),
    /// n-gram order outside 1..=4.
    InvalidOrder(usize),
    /// A matrix entry is NaN or infinite.
    NonFinite,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::ZeroVector => f.write_str("vector has zero or non-finite norm"),
            Error::MissingEmbedding(s) => write!(f, "no embedding for sentence {s:?}"),
            Error::MissingReferences(v) => write!(f, "no references for video {v:?}"),
            Error::InvalidOrder(n) => write!(f, "n-gram order {n} outside 1..=4"),
            Error::NonFinite => f.write_str("matrix contains a non-finite entry"),
        }
    }
}

impl core::error::Error for Error {}
