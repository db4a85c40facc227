use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("polynomial {poly} is not integral: {reason}")]
    NotIntegral { poly: String, reason: String },
    #[error("duplicate polynomial {0} in progression")]
    DuplicatePolynomial(String),
    #[error("zero polynomial in progression at position {0}")]
    ZeroPolynomial(usize),
    #[error("index {index} out of range for progression of length {t}")]
    IndexOutOfRange { index: usize, t: usize },
    #[error("progression is not homogeneous; witness {0}")]
    NotHomogeneous(String),
    #[error("Vandermonde bound violated: relation {relation} has degree {degree} > {bound}")]
    BoundViolated { relation: String, degree: usize, bound: usize },
    #[error("modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: usize, found: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("iteration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("complexity exceeds 1 at index {index}; witness relation {relation}")]
    ComplexityTooHigh { index: usize, relation: String },
    #[error("lcm of denominators {lcm} shares a factor with {modulus}")]
    DenominatorNotCoprime { lcm: String, modulus: u64 },
    #[error("relation degree {degree} exceeds system order {order}")]
    DegreeExceedsOrder { degree: usize, order: usize },
    #[error("malformed dependency: {0}")]
    MalformedDependency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
