use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live over different variable registries")]
    RegistryMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is not a simplex parameter")]
    NotSimplexVariable(String),
    #[error("vector length {got} does not match dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("value kind mismatch: expected {expected}, got {got}")]
    KindMismatch { expected: &'static str, got: &'static str },
    #[error("invariant polynomial arity {expected} but {got} g-arguments supplied")]
    ArityMismatch { expected: usize, got: usize },
    #[error("Lie algebra `{0}` has no faithful matrix representation")]
    MissingRepresentation(String),
    #[error("matrix product leaves the span of the representation of `{0}`")]
    ProductNotClosed(String),
    #[error("invalid face index {index} for a {dim}-simplex")]
    InvalidFace { index: usize, dim: usize },
    #[error("group element is not invertible: {0}")]
    NotInvertible(String),
    #[error("crossed module does not support the conjugation action: {0}")]
    UnsupportedAction(String),
    #[error("connection family has {got} members, expected {expected}")]
    FamilySize { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("{path}:{line}:{col}: {msg}")]
    Parse { path: String, line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
