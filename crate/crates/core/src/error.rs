//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("discrete logarithm of zero")]
    ZeroElement,
    #[error("element is not a member of the group")]
    ElementNotInGroup,
    #[error("q = {0} is even; character tables require odd q")]
    EvenQ(u64),
    #[error("congruence violated: {0}")]
    CongruenceViolated(String),
    #[error("character sum did not reduce to an integer: {0}")]
    NonIntegerResult(String),
    #[error("genus {0} unsupported here (need g >= {1})")]
    BadGenus(u32, u32),
    #[error("assembled polynomial has non-integer coefficients: {0}")]
    NonIntegerCoefficients(String),
    #[error("inexact polynomial division")]
    InexactDivision,
    #[error("need {needed} interpolation points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("interpolation point at q = {0} is inconsistent with the fitted polynomial")]
    InconsistentPoints(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("rank {0} unsupported for this operation")]
    UnsupportedRank(u8),
    #[error("required character table unavailable: {0}")]
    MissingTable(String),
    #[error("parse error: {0}")]
    Parse(String),
}
