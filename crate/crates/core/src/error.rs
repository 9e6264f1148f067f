use thiserror::Error;

use crate::liealg::Violation;
use crate::scalar::FieldSpec;

/// Errors raised by the algebra, linear algebra and file-format layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid prime {0}: {1}")]
    InvalidPrime(u64, &'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("not a Lie algebra: {0}")]
    InvalidAlgebra(Violation),
    #[error("subspace is not an ideal")]
    NotAnIdeal,
    #[error("matrix is not a derivation: Leibniz rule fails on (e{}, e{})", .i + 1, .j + 1)]
    NotADerivation { i: usize, j: usize },
    #[error("wrong characteristic: {0}")]
    WrongCharacteristic(String),
    #[error("enumeration needs {required} points but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("matrix is singular")]
    Singular,
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
