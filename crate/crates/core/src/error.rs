use thiserror::Error;

/// Errors raised by the library. Absence of a center or retraction is not an
/// error; those operations return `Option`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown element id `{0}`")]
    UnknownElement(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("incidence elements live on different posets")]
    MismatchedPosets,

    #[error("map is not order-preserving: {0}")]
    NotOrderPreserving(String),

    #[error("filtration is not by subcomplexes: {0}")]
    NotFiltered(String),

    #[error("poset carries no rank function")]
    Unranked,

    #[error("series constant term must be 1")]
    NonUnitConstant,

    #[error("truncation insufficient: {0}")]
    InsufficientTruncation(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("cost guard exceeded: {0}")]
    CostGuard(String),

    #[error("table is not pure: class at degree {degree} has weight {weight}")]
    NotPure { degree: i64, weight: i64 },

    #[error("cohomology table has no unit class in degree 0")]
    MissingUnit,

    #[error("cutoff mismatch: {0}")]
    CutoffMismatch(String),

    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
