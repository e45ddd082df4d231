//! Error type shared across the crate.

use std::fmt;

/// Errors produced by construction and computation routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor parameter lies outside its admissible range.
    ParameterOutOfRange(String),
    /// Two operands belong to different quadratic fields.
    FieldMismatch,
    /// Division by an exact zero.
    DivisionByZero,
    /// A value has no terminating greedy expansion, so it is not a beta-integer.
    NotABetaInteger(String),
    /// A point falls outside the acceptance window of a model set.
    OutOfWindow(String),
    /// A node index is not covered by the generated sequence.
    IndexOutOfRange { index: i64, lo: i64, hi: i64 },
    /// The node sequence is too short for the requested operation.
    SequenceTooShort(String),
    /// A requested window is not supported by the generator.
    InvalidWindow(String),
    /// An exact linear system is singular or inconsistent.
    SingularSystem(String),
    /// A rank-deficient system where a unique solution was required.
    RankDeficient(String),
    /// The target function is not in the span of the requested basis.
    NotInSpan(String),
    /// A function with zero integral cannot be normalized.
    ZeroIntegral,
    /// The analysis window is too small to hold a single basis function.
    WindowTooSmall(String),
    /// Coefficient vectors disagree on scale or window.
    WindowMismatch(String),
    /// Catch-all for invalid argument combinations.
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ParameterOutOfRange(msg) => write!(f, "parameter out of range: {msg}"),
            Error::FieldMismatch => write!(f, "operands belong to different quadratic fields"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotABetaInteger(msg) => write!(f, "not a beta-integer: {msg}"),
            Error::OutOfWindow(msg) => write!(f, "point outside the model-set window: {msg}"),
            Error::IndexOutOfRange { index, lo, hi } => {
                write!(f, "node index {index} outside generated range [{lo}, {hi}]")
            }
            Error::SequenceTooShort(msg) => write!(f, "node sequence too short: {msg}"),
            Error::InvalidWindow(msg) => write!(f, "unsupported window: {msg}"),
            Error::SingularSystem(msg) => write!(f, "singular or inconsistent system: {msg}"),
            Error::RankDeficient(msg) => write!(f, "rank-deficient system: {msg}"),
            Error::NotInSpan(msg) => write!(f, "target not in span: {msg}"),
            Error::ZeroIntegral => write!(f, "cannot normalize a function with zero integral"),
            Error::WindowTooSmall(msg) => write!(f, "window too small: {msg}"),
            Error::WindowMismatch(msg) => write!(f, "window mismatch: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
