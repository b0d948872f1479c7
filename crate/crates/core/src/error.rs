use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("d∘d ≠ 0 at degree {degree}")]
    NotAComplex { degree: i32 },
    #[error("structural error: {0}")]
    Structure(String),
    #[error("identity violated: {0}")]
    Identity(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("non-terminating: {0}")]
    NonTerminating(String),
    #[error("inexact window: {0}")]
    Inexact(String),
    #[error("divergent: {0}")]
    Divergent(String),
    #[error("enumeration refused: {0}")]
    EnumerationRefused(String),
    #[error("not a Maurer-Cartan element: {0}")]
    NotMaurerCartan(String),
    #[error("undefined: {0}")]
    Undefined(String),
}
