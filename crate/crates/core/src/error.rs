//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("modulus must be monic of degree m over F_p")]
    NonMonicModulus,
    /// Powers of gamma collide (or hit zero) before exponent q-1. This is
    /// also the signal for a reducible modulus, whose unit group has order
    /// less than q-1.
    #[error("gamma is not a primitive element (or the modulus is reducible)")]
    GammaNotPrimitive,
    #[error("field size {q} exceeds the table budget {budget}")]
    FieldTooLarge { q: i64, budget: i64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("zero lies in no cyclotomic coset")]
    ZeroHasNoCoset,
    #[error("index {ell} does not divide q-1 = {group_order}")]
    EllDoesNotDivide { ell: i64, group_order: i64 },
    #[error("r and k must both have length ell")]
    LengthMismatch,
    #[error("mapping is not a permutation")]
    NotAPermutation,
    #[error("value table is not a bijection")]
    NotBijective,
    #[error("q must be odd")]
    EvenCharacteristic,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
