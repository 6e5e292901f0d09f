use thiserror::Error;

/// Count type used for every exact tally. Arithmetic on it is always checked.
pub type Count = u128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("count overflowed 128-bit arithmetic")]
    Overflow,
    #[error("modulus {n} exceeds enumeration cap {cap}")]
    CapExceeded { n: u64, cap: u64 },
    #[error("matrix is outside the map's domain: {0}")]
    DomainViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn checked_mul(a: Count, b: Count) -> Result<Count> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_add(a: Count, b: Count) -> Result<Count> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_pow(base: Count, exp: u32) -> Result<Count> {
    base.checked_pow(exp).ok_or(Error::Overflow)
}
