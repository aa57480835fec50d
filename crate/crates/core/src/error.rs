//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("constant term must be zero")]
    ConstantTermNotZero,
    #[error("constant term must be one")]
    ConstantTermNotOne,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expression has a pole at q = 0")]
    PoleAtQZero,
    #[error("invalid label family: {0}")]
    InvalidTree(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("denominator class has identically vanishing trace, no inverse exists")]
    UnitClassVanishes,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
