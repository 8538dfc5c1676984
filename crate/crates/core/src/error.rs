use thiserror::Error;

/// Errors raised anywhere in the analysis pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed arguments to a numerical kernel (shape, symmetry, finiteness).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The oscillator model or coupling graph violates one or more invariants.
    #[error("invalid model: {}", .0.join("; "))]
    InvalidModel(Vec<String>),

    /// An iterative kernel did not converge within its budget.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The requested test does not apply to this configuration.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// Configuration text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
