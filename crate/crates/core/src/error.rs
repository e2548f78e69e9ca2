use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("arc {arc} is used {count} times (expected exactly 2)")]
    ArcIncidence { arc: u32, count: usize },

    #[error("arc labels must be positive (line {line}, column {column})")]
    NonPositiveArc { line: usize, column: usize },

    #[error("diagram too large: {0}")]
    TooLarge(String),

    #[error("crossing {index} out of range (diagram has {count} crossings)")]
    InvalidCrossing { index: usize, count: usize },

    #[error("unknown arc {0}")]
    UnknownArc(u32),

    #[error("torus parameter must be at least {min}, got {got}")]
    TorusParameter { min: i64, got: i64 },

    #[error("inconsistent orientation: {0}")]
    Orientation(String),

    #[error("state covers {got} crossings but the diagram has {expected}")]
    PartialState { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("differential does not square to zero at grading ({a}, {b})")]
    NotAComplex { a: i64, b: i64 },

    #[error("grading ({a}, {b}) has odd offset from writhe {w}")]
    Parity { a: i64, b: i64, w: i64 },

    #[error("invalid crossing ordering: {0}")]
    Ordering(String),

    #[error("{0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
