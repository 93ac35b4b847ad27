use thiserror::Error;

use super::var::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("division by zero expression")]
    DivisionByZero,
    #[error("denominator vanishes identically after substitution")]
    SubstitutionPole,
    #[error("exponential unit {0} cannot be bound to zero")]
    ZeroUnitBinding(Var),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix dimensions do not match for this operation")]
    DimensionMismatch,
}
