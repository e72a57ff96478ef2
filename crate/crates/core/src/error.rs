use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("triangle condition fails for ({0}, {1}, {2}) (twice-values)")]
    Triangle(u32, u32, u32),
    #[error("invalid projection m={m} for j={j} (twice-values)")]
    Projection { j: u32, m: i32 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("convention mismatch: expected {expected}, found {found}")]
    Convention { expected: String, found: String },
    #[error("the two 6j formulas disagree at {0:?}")]
    FormulaMismatch([u32; 6]),
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("H is not diagonal with integer entries")]
    NonDiagonalH,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
