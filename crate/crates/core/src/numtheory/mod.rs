//! Exact arithmetic substrate: rationals, 2-adic valuations, digit sets and
//! mask polynomials.

mod cyclotomic;
mod digits;
mod mask;
mod rational;
mod valuation;

pub use cyclotomic::roots_of_unity_sum_vanishes;
pub use digits::{gcd_diffsets, DigitSet};
pub use mask::{mask_eval, mask_zero_exact};
pub use rational::{q, ParseRationalError, Rational};
pub use valuation::{v2, v2_int, v2_u64, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("digit set must be nonempty")]
    EmptyDigitSet,
    #[error("digit {0} appears more than once")]
    DuplicateDigit(Rational),
    #[error("direct sum is not direct: {0} has two representations")]
    DirectSumCollision(Rational),
    #[error("digit set has non-integer elements")]
    NonIntegerDigits,
    #[error("every digit set is a singleton, so there are no differences")]
    NoDifferences,
}
