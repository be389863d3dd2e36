use thiserror::Error;

use crate::algebra::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("linear system has no solution")]
    Infeasible,
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid structure-constant key: {0}")]
    InvalidKey(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error("parameter error: {0}")]
    Param(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("not a transposed Poisson structure: {0}")]
    NotTransposedPoisson(Box<Violation>),
    #[error("parse error at {at}: {message}")]
    Parse { at: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
