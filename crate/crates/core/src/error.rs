//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("duplicate {kind} term key {key}")]
    DuplicateTerm { kind: &'static str, key: String },

    #[error("term key {key} has repeated indices")]
    DegenerateKey { key: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("relative error undefined: ground-state energy is zero")]
    UndefinedNormalization,

    #[error("record count {count} is not divisible by block size {block_size}")]
    BlockShape { count: usize, block_size: usize },

    #[error("problem size {n} exceeds brute-force guard of {limit} variables")]
    SizeGuard { n: usize, limit: usize },

    #[error("induced width {width} exceeds elimination guard of {limit}")]
    WidthGuard { width: usize, limit: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(path: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &str, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_string(),
            source,
        }
    }
}
