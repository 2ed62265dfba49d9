//! Arbitrary-precision real and complex numbers.
//!
//! A [`BigReal`] is an astro-float significand kept in `[1/2, 1)` together with
//! a separate `i64` binary exponent, so magnitudes like `10^-10000000` stay
//! representable long after the significand library's own exponent would
//! run out. Precision travels with each value; binary operations use the
//! larger of the two operand precisions.

mod complex;
mod real;

pub use complex::{e_of, e_of_rational, BigComplex};
pub use real::BigReal;

/// Precision in bits.
pub type Bits = usize;

/// Default working precision.
pub const DEFAULT_PREC: Bits = 512;

/// Largest binary exponent magnitude accepted before an operation reports overflow.
pub const EXP_LIMIT: i64 = 1 << 60;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericsError {
    #[error("binary exponent out of range in {0}")]
    Overflow(&'static str),
    #[error("{0}: argument outside the domain")]
    Domain(&'static str),
    #[error("invalid decimal literal {0:?}")]
    Parse(String),
}
