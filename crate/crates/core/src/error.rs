use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("involution {involution} is not defined on {descriptor}")]
    IncompatibleInvolution {
        descriptor: String,
        involution: String,
    },
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("bad index: {0}")]
    BadIndex(String),
    #[error("bad coordinate: {0}")]
    BadCoordinate(String),
    #[error("not in the form parameter: {0}")]
    InvalidFormParameter(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("invalid phi: {0}")]
    InvalidPhi(String),
    #[error("condition (D) cannot be solved for a1: {0}")]
    ConditionUnsolvable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
