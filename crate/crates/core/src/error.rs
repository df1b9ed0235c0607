use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be an odd prime, got {0}")]
    NotOddPrime(u64),
    #[error("{g} is not a primitive root modulo {p}")]
    NotGenerator { p: u64, g: u64 },
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("cannot factor {0}: input must be at least 2")]
    FactorTooSmall(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
