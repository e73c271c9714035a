use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension n = {n} outside the supported range 1..={cap}")]
    Capacity { n: usize, cap: usize },

    #[error("threshold form vanishes at input index {index} (point {point:?})")]
    ZeroOfForm { index: usize, point: Vec<i8> },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
