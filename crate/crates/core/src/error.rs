use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("rejection sampling gave up after {attempts} attempts ({what})")]
    AttemptsExhausted { what: &'static str, attempts: usize },

    #[error("relator count {count:.3e} exceeds the cap {cap}")]
    CountOverflow { count: f64, cap: usize },

    #[error("enumeration of {size:.3e} candidates exceeds the cap {cap}")]
    EnumerationCap { size: f64, cap: usize },

    #[error("relator {index} ({word}) is not cyclically reduced")]
    NotCyclicallyReduced { index: usize, word: String },

    #[error("relator {index} has length {len}, expected 3")]
    WrongRelatorLength { index: usize, len: usize },

    #[error("vertex {vertex} has degree zero")]
    ZeroDegree { vertex: usize },

    #[error("matrix is not symmetric: |m[{row}][{col}] - m[{col}][{row}]| = {diff:e}")]
    Asymmetric { row: usize, col: usize, diff: f64 },

    #[error("not a perfect matching: {0}")]
    NotPerfect(String),

    #[error("not a bijection: {0}")]
    NotBijection(String),

    #[error("exact search refused: part size {part_size} exceeds the cap {cap}")]
    ExactCapExceeded { part_size: usize, cap: usize },

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}
