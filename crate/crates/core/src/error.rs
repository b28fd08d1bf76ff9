use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("magnitude exceeds 2^63 - 1")]
    Overflow,
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("bad modulus {0}")]
    BadModulus(u64),
    #[error("no base generates the classes modulo {0}")]
    NoGenerator(u64),
    #[error("{0} is a unit; atoms and factorizations need |x| >= 2")]
    UnitInput(i64),
    #[error("more than {cap} partitions")]
    TooManyPartitions { cap: usize },
    #[error("table would have {entries} entries, cap is {cap}")]
    TableTooLarge { entries: u64, cap: u64 },
    #[error("no theorem classifier for modulus {0}")]
    UnsupportedModulus(u64),
    #[error("no prime in class {class} below {cap}")]
    PrimeSearchExhausted { class: String, cap: u64 },
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
