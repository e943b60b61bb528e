//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

use crate::sweep::SweepRole;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Rejections raised by constructors and operations.
///
/// Degenerate *values* (a singular bin, an over-unity reflection) are not
/// errors: they are carried through as per-point flags. Errors are reserved
/// for inputs the operation cannot act on at all.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A frequency grid violated its invariants.
    InvalidGrid {
        index: usize,
        message: &'static str,
    },
    /// Two objects that must share a grid differ, first at this point index.
    GridMismatch { index: usize },
    /// A sweep had the wrong role for the operation.
    RoleMismatch {
        expected: SweepRole,
        found: SweepRole,
    },
    /// The requested frequency span is not covered by the available data.
    Span {
        requested_lo_hz: f64,
        requested_hi_hz: f64,
        available_lo_hz: f64,
        available_hi_hz: f64,
    },
    /// Value array length disagrees with the grid length.
    LengthMismatch { grid: usize, values: usize },
    /// A non-finite value appeared where a finite one is required.
    NonFinite { index: usize, what: &'static str },
    /// A matrix declared reciprocal has a determinant too far from one.
    NotReciprocal { index: usize, defect: f64 },
    /// An operation needs more runs than were supplied.
    TooFewRuns { needed: usize, got: usize },
    /// Catch-all for rejected parameters (model values, band definitions,
    /// widths, thresholds).
    Invalid { message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGrid { index, message } => {
                write!(f, "invalid grid at point {index}: {message}")
            }
            Error::GridMismatch { index } => {
                write!(f, "grids differ, first at point {index}")
            }
            Error::RoleMismatch { expected, found } => {
                write!(f, "expected a {expected} sweep, found {found}")
            }
            Error::Span {
                requested_lo_hz,
                requested_hi_hz,
                available_lo_hz,
                available_hi_hz,
            } => write!(
                f,
                "requested span {requested_lo_hz:.6e}..{requested_hi_hz:.6e} Hz \
                 not covered by available {available_lo_hz:.6e}..{available_hi_hz:.6e} Hz"
            ),
            Error::LengthMismatch { grid, values } => {
                write!(f, "grid has {grid} points but {values} values were given")
            }
            Error::NonFinite { index, what } => {
                write!(f, "non-finite {what} at point {index}")
            }
            Error::NotReciprocal { index, defect } => {
                write!(
                    f,
                    "matrix at point {index} declared reciprocal but determinant defect is {defect:.3e}"
                )
            }
            Error::TooFewRuns { needed, got } => {
                write!(f, "operation needs at least {needed} runs, got {got}")
            }
            Error::Invalid { message } => f.write_str(message),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid {
            message: message.into(),
        }
    }
}
