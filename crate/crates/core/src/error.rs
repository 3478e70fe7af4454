use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown tag `{0}` for this number context")]
    UnknownTag(String),
    #[error("duplicate tag `{0}`")]
    DuplicateTag(String),
    #[error("right-hand side b is integral; group relaxations need b outside Z^n")]
    IntegralRhs,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("comparison undecided after {0} refinements")]
    RefinementCap(u32),
    #[error("the corner polyhedron is empty")]
    EmptyCorner,
    #[error("enumeration incomplete: {0}")]
    Incomplete(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not representable: {0}")]
    NotRepresentable(String),
    #[error("certificate failed to verify: {0}")]
    Certificate(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded(_) | Error::RefinementCap(_) | Error::Incomplete(_))
    }
}
