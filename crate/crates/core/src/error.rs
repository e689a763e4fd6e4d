use thiserror::Error;

/// Errors raised by the exact-arithmetic and Weil-Deligne layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero scalar has no q-monomial form")]
    ZeroScalar,
    #[error("invalid residue parameters: {0}")]
    InvalidParams(String),
    #[error("pole at the evaluation point")]
    PoleAtPoint,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("group closure exceeded cap {0}: inertia image not verifiably finite")]
    CapExceeded(usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("residue parameters or cyclotomic levels differ")]
    ParamsMismatch,
    #[error("eigenvalues outside supported field: {0}")]
    EigenvaluesOutsideSupportedField(String),
    #[error("Frobenius is singular at the specialization point")]
    SingularFrobeniusAtPoint,
    #[error("an unramified character vanishes at the specialization point")]
    VanishingCharacterAtPoint,
    #[error("not irreducible: {0}")]
    NotIrreducible(String),
    #[error("not pure: {0}")]
    NotPure(String),
    #[error("trace mismatch: {0}")]
    TraceMismatch(String),
    #[error("invalid Weil-Deligne datum: {0}")]
    InvalidDatum(String),
    #[error("value not representable: {0}")]
    Unrepresentable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
