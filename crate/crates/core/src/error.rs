use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word width {0} outside 2..=32")]
    InvalidWidth(u32),
    #[error("value {value} does not fit in {bits} bits")]
    ValueOutOfRange { value: u64, bits: u32 },
    #[error("width mismatch: {left} vs {right} bits")]
    WidthMismatch { left: u32, right: u32 },
    #[error("invalid dimensions {height}x{width}")]
    InvalidDimensions { height: usize, width: usize },
    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: String, actual: String },
    #[error("{0} is not a permutation")]
    NotBijective(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("inconsistent triples: no key satisfies every equation")]
    Inconsistent,
    #[error("pgm parse error at byte {offset}: {reason}")]
    Pgm { offset: usize, reason: String },
    #[error("model violation: {0}")]
    ModelViolation(String),
    #[error("oracle refused: {0}")]
    OracleRefused(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
