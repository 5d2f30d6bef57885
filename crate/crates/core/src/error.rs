use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("order must be a multiple of 4 (m = 4k), got {0}")]
    OrderNotMultipleOfFour(usize),

    #[error("{what} index {index} out of range [{lo}, {hi}]")]
    Index {
        what: &'static str,
        index: usize,
        lo: usize,
        hi: usize,
    },

    #[error("invalid range: lo {lo} > hi {hi}")]
    Range { lo: i64, hi: i64 },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("invalid sign matrix: {0}")]
    Matrix(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("trace is not monotone non-increasing at iteration {iteration}")]
    TraceNotMonotone { iteration: usize },

    #[error("run record claims success but its matrix is not Hadamard")]
    UnverifiedRecord,

    #[error("malformed document: {0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
