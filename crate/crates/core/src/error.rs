use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field parameter d={0}: must be a nonzero squarefree integer")]
    InvalidField(i64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("zero has no valuation, height or place function")]
    ZeroElement,
    #[error("fields differ: Q(sqrt({0})) vs Q(sqrt({1}))")]
    FieldMismatch(i64, i64),
    #[error("unsupported tower: {0}")]
    UnsupportedTower(String),
    #[error("ideal is not principal: {0}")]
    NotPrincipal(String),
    #[error("discriminant {disc} exceeds the configured bound {bound}")]
    DiscriminantBound { disc: i64, bound: i64 },
    #[error("set of places is empty")]
    EmptySet,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("cannot resolve S-unit coordinates of {0}")]
    Unresolvable(String),
    #[error("property violated: {0}")]
    Violation(String),
    #[error("arithmetic: {0}")]
    Arithmetic(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
