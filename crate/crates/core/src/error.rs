use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the arithmetic and continued-fraction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{a} is not invertible modulo {modulus}")]
    NotInvertible { a: BigInt, modulus: BigInt },

    #[error("radicand {0} is a perfect square")]
    PerfectSquare(BigInt),

    #[error("{radicand} has no square root in Q_{p}")]
    NoPadicSqrt { radicand: BigInt, p: u64 },

    #[error("branch {branch} is not a square root of {radicand} modulo {p}")]
    InvalidBranch {
        branch: u64,
        radicand: BigInt,
        p: u64,
    },

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("complete quotient became rational at step {step}")]
    RationalState { step: usize },

    #[error("Browkin expansion of a rational did not terminate within {0} steps")]
    NonTerminating(usize),

    #[error("division by zero while evaluating a continued fraction")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("inconsistent certificate: {0}")]
    Certificate(String),

    #[error("no square-root branch reproduces the given continued fraction")]
    NoMatchingBranch,
}

pub type Result<T> = std::result::Result<T, Error>;
