use thiserror::Error;

/// Errors raised by the solver and its supporting modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A state or parameter lies outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A conserved state failed the admissibility test (vacuum or negative internal energy).
    #[error("inadmissible state at point {index:?}: {reason}")]
    Inadmissible { index: Option<usize>, reason: String },

    /// The kinetic speed does not strictly exceed the characteristic speed bound.
    #[error("subcharacteristic condition violated at point {index:?}: a = {a}, bound = {bound}")]
    Subcharacteristic { index: Option<usize>, a: f64, bound: f64 },

    /// A small dense system was singular (or numerically so).
    #[error("singular local system at point {index:?}")]
    Singular { index: Option<usize> },

    /// The requested operation does not apply to this model or configuration.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A case description is malformed.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by the numerics (as opposed to bad input files).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Inadmissible { .. } | Error::Subcharacteristic { .. } | Error::Singular { .. }
        )
    }

    /// Attach a grid index to errors that carry one.
    pub fn at(self, i: usize) -> Self {
        match self {
            Error::Inadmissible { reason, .. } => Error::Inadmissible { index: Some(i), reason },
            Error::Subcharacteristic { a, bound, .. } => Error::Subcharacteristic { index: Some(i), a, bound },
            Error::Singular { .. } => Error::Singular { index: Some(i) },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
