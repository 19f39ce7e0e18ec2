use alloc::string::String;
use core::fmt;

/// Errors produced by the core algorithms.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor or operation received parameters outside its domain.
    InvalidParameter(String),
    /// A degree sequence cannot be realised by the requested generator.
    Infeasible(String),
    /// Parity-check matrix has full column rank, so the code is `{0}`.
    TrivialCode,
    /// Exhaustive enumeration would exceed the configured dimension cap.
    DimensionTooLarge { dimension: usize, cap: usize },
    /// An index fell outside the valid range.
    IndexOutOfRange { index: u64, len: u64 },
    /// Two vectors or matrices disagree in size.
    LengthMismatch { expected: usize, found: usize },
    /// A real-valued argument falls outside the function's domain.
    Domain(String),
    /// Matrices handed to a multi-basis decoder describe different codes.
    CodeMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(s) => write!(f, "invalid parameter: {s}"),
            Error::Infeasible(s) => write!(f, "infeasible degree request: {s}"),
            Error::TrivialCode => write!(f, "parity-check matrix has full rank; code dimension is 0"),
            Error::DimensionTooLarge { dimension, cap } => {
                write!(f, "code dimension {dimension} exceeds enumeration cap {cap}")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range (valid: < {len})")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::Domain(s) => write!(f, "argument outside domain: {s}"),
            Error::CodeMismatch => write!(f, "parity-check matrices do not describe the same code"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
