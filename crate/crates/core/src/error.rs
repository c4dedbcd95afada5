use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size out of range: {0}")]
    Size(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("domain error: {0}")]
    Domain(String),

    /// A computed quantity left its admissible range by more than roundoff.
    #[error("numerical integrity violated: {0}")]
    Numerical(String),

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
