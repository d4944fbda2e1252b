use alloc::string::String;
use core::fmt;

/// Errors raised by the geometric and numerical routines.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Input violates a structural invariant (malformed polygon, degenerate
    /// mesh triangle, bad boundary curve, ...).
    Structural(String),
    /// An operation was applied outside its domain (for instance a ratio of
    /// Jacobians on a seminorm that is not a norm).
    Domain(String),
    /// An iterative method failed to reach its tolerance.
    Numerical { what: String, residual: f64 },
    /// Invalid parameter (weights, resolutions, ...).
    Parameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Structural(m) => write!(f, "structural error: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Numerical { what, residual } => {
                write!(f, "numerical error: {what} (residual {residual:e})")
            }
            Error::Parameter(m) => write!(f, "invalid parameter: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}
