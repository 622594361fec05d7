//! Exact arithmetic on numbers of the form `(a + b·√d) / c`.
//!
//! Every floor, fractional part and comparison is decided with integer
//! arithmetic; there is no floating-point path.

mod cfrac;
mod quadratic;

use num_bigint::BigInt;

pub use cfrac::{continued_fraction, ContinuedFraction, PartialQuotients};
pub use quadratic::QuadraticIrrational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("negative radicand {0}")]
    NegativeRadicand(BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("arithmetic across radicands {0} and {1} is not representable")]
    RadicandMismatch(BigInt, BigInt),
    #[error("incomparable representation: radicands {0} and {1} need a degree-4 comparison")]
    IncomparableRepresentation(BigInt, BigInt),
    #[error("rational input {0}")]
    RationalInput(String),
    #[error("cannot parse number `{input}`: {reason}")]
    Parse { input: String, reason: String },
}
