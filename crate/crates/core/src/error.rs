use alloc::string::String;
use core::fmt;

use crate::scalar::ScalarError;

/// Failure modes shared by every layer above the scalar kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    Scalar(ScalarError),
    ChartMismatch { expected: String, found: String },
    UnknownCoordinate(String),
    DuplicateCoordinate(String),
    TooManyOddCoordinates(usize),
    /// A scalar coefficient mentions an odd coordinate.
    OddInCoefficient(String),
    /// Superfunction with zero body.
    NonInvertible,
    SingularBody,
    DimensionMismatch { expected: usize, found: usize },
    ParityMismatch { coordinate: String },
    NotHomogeneous,
    /// A form has a differential of a coordinate outside the image.
    NotSemibasic(String),
    Degenerate(String),
    NotAffine(String),
    Atlas(String),
}

impl From<ScalarError> for Error {
    fn from(e: ScalarError) -> Self {
        Error::Scalar(e)
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Scalar(e) => write!(f, "{e}"),
            Error::ChartMismatch { expected, found } => {
                write!(f, "coordinate system mismatch: expected {expected}, found {found}")
            }
            Error::UnknownCoordinate(c) => write!(f, "unknown coordinate `{c}`"),
            Error::DuplicateCoordinate(c) => write!(f, "duplicate coordinate `{c}`"),
            Error::TooManyOddCoordinates(n) => write!(f, "{n} odd coordinates exceed the limit of 64"),
            Error::OddInCoefficient(c) => write!(f, "odd coordinate `{c}` inside a scalar coefficient"),
            Error::NonInvertible => f.write_str("superfunction has zero body and is not invertible"),
            Error::SingularBody => f.write_str("graded matrix has a singular body"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::ParityMismatch { coordinate } => {
                write!(f, "assignment for `{coordinate}` has the wrong parity")
            }
            Error::NotHomogeneous => f.write_str("superfunction is not parity-homogeneous"),
            Error::NotSemibasic(c) => write!(f, "form is not semibasic: it has a d{c} term"),
            Error::Degenerate(why) => write!(f, "degenerate: {why}"),
            Error::NotAffine(why) => write!(f, "symbolic inversion unsupported: {why}"),
            Error::Atlas(why) => write!(f, "atlas: {why}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
