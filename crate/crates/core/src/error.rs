use thiserror::Error;

/// Errors raised by the library. Each variant maps to a distinct CLI exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument must be positive: {0}")]
    NonPositive(&'static str),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what}: requested {requested} exceeds the configured limit {limit}")]
    LimitExceeded {
        what: &'static str,
        requested: String,
        limit: u64,
    },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is reducible")]
    Reducible,
    #[error("polynomial X has no multiplicative order")]
    PolynomialIsX,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix does not have determinant 1")]
    NotSpecialLinear,
    #[error("element is not in C1")]
    NotInC1,
    #[error("element is not in C2")]
    NotInC2,
    #[error("excluded case (n,q) = ({n},{q}): {reason}")]
    ExcludedCase {
        n: usize,
        q: u64,
        reason: &'static str,
    },
    #[error("set is empty")]
    EmptySet,
    #[error("subset is not conjugation invariant")]
    NotConjugationInvariant,
    #[error("{x} is not coprime to the modulus {modulus}")]
    NotCoprime { x: String, modulus: String },
    #[error("supplied factorization is inconsistent with the element")]
    InconsistentFactorization,
    #[error("character is trivial")]
    TrivialCharacter,
    #[error("vectors are linearly dependent")]
    LinearlyDependent,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn limit(what: &'static str, requested: impl ToString, limit: u64) -> Self {
        Error::LimitExceeded {
            what,
            requested: requested.to_string(),
            limit,
        }
    }
}
