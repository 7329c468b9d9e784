use std::io;

use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input must be a positive integer, got 0")]
    Zero,
    #[error("m must be greater than 1, got {0}")]
    NotAboveOne(String),
    #[error("k = {0} is outside the supported range {1}")]
    FactorCount(u32, &'static str),
    #[error("lower bound {0} is outside the supported range {1}")]
    LowerBound(u64, &'static str),
    #[error("divisor must be positive, got {0}")]
    NonPositiveDivisor(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime factors must be strictly increasing with positive exponents")]
    MalformedSignature,
    #[error("value does not fit in 64 bits")]
    Overflow,
    #[error("invalid multiplicity pattern {0:?}")]
    InvalidPattern(Vec<u32>),
    #[error("no closed form for multiplicity pattern {0:?}")]
    UnsupportedPattern(Vec<u32>),
    /// A rational formula produced a numerator that is not a multiple of its
    /// denominator. This is always a bug in the formula.
    #[error("{formula}: numerator {numerator} is not divisible by {denominator}")]
    Indivisible {
        formula: &'static str,
        numerator: BigInt,
        denominator: u32,
    },
    #[error("oracle budget exceeded: {0}")]
    OracleBudget(String),
    #[error("sieve limit {requested} exceeds budget {budget}")]
    SieveBudget { requested: u64, budget: u64 },
    #[error("{m} is outside the sieve range [2, {limit}]")]
    OutsideSieve { m: u64, limit: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}
