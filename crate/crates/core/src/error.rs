use thiserror::Error;

/// Failure modes shared across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two objects that must agree (grids, coordinates, orders) do not.
    #[error("contract violation: {0}")]
    Contract(String),

    /// An iterative numerical method stopped before meeting its tolerance.
    #[error("numerical failure: {message} (achieved error estimate {estimate:e})")]
    Numerical { message: String, estimate: f64 },

    /// A dynamical hypothesis the construction relies on does not hold.
    #[error("criterion violation: {0}")]
    Criterion(String),

    /// A hypercyclic window is too short; carries the smallest admissible `x_max`.
    #[error("window too small: x_max must be at least {required_x_max:e}")]
    WindowTooSmall { required_x_max: f64 },

    /// Reading or writing serialized data failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
