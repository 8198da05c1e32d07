use thiserror::Error;

/// Errors produced by the field, spectrum, sum, code and curve routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field of size {p}^{n} exceeds the configured cap of {cap} elements")]
    FieldTooLarge { p: u32, n: u32, cap: u64 },

    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("enumeration cost {cost} exceeds budget {budget}; {hint}")]
    Budget {
        cost: u128,
        budget: u128,
        hint: &'static str,
    },

    #[error("parameters fall outside every case of the point-count formula: {0}")]
    NotCovered(String),
}

pub type Result<T> = std::result::Result<T, Error>;
