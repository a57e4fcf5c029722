use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::Zero;

use super::Rational;

/// A 2-adic valuation: an integer, or infinity for the input zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, _) => Ordering::Greater,
            (_, Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// Exponent of 2 in a nonzero integer; `Infinity` for zero.
pub fn v2_int(n: &BigInt) -> Valuation {
    if n.is_zero() {
        Valuation::Infinity
    } else {
        // trailing_zeros is Some for every nonzero value
        Valuation::Finite(n.trailing_zeros().unwrap_or(0) as i64)
    }
}

pub fn v2_u64(n: u64) -> Valuation {
    if n == 0 {
        Valuation::Infinity
    } else {
        Valuation::Finite(n.trailing_zeros() as i64)
    }
}

/// `v2(m/n) = v2(m) - v2(n)`, computed on the reduced form.
pub fn v2(q: &Rational) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinity;
    }
    match (v2_int(q.numer()), v2_int(q.denom())) {
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        _ => unreachable!("nonzero reduced rational has finite valuations"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::q;
    use proptest::prelude::*;

    #[test]
    fn worked_values() {
        assert_eq!(v2(&Rational::zero()), Valuation::Infinity);
        assert_eq!(v2(&q(1, 1)), Valuation::Finite(0));
        assert_eq!(v2(&q(64, 7)), Valuation::Finite(6));
        assert_eq!(v2(&q(3, 8)), Valuation::Finite(-3));
        assert_eq!(v2(&q(-12, 5)), Valuation::Finite(2));
    }

    #[test]
    fn infinity_dominates_order() {
        assert!(Valuation::Infinity > Valuation::Finite(i64::MAX));
        assert_eq!(Valuation::Finite(2) + Valuation::Infinity, Valuation::Infinity);
    }

    fn nonzero_rational() -> impl Strategy<Value = Rational> {
        (
            prop_oneof![-100_000i64..-1, 1i64..100_000],
            1i64..100_000,
        )
            .prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn valuation_axioms(a in nonzero_rational(), b in nonzero_rational()) {
            let va = v2(&a).finite().unwrap();
            let vb = v2(&b).finite().unwrap();
            prop_assert_eq!(v2(&(&a * &b)), Valuation::Finite(va + vb));
            let sum = &a + &b;
            prop_assert!(v2(&sum) >= Valuation::Finite(va.min(vb)));
        }

        #[test]
        fn stripping_powers_gives_odd_over_odd(a in nonzero_rational()) {
            let v = v2(&a).finite().unwrap() as i32;
            let stripped = &a * &Rational::from_integer(2).pow(-v);
            prop_assert!(stripped.numer().bit(0));
            prop_assert!(stripped.denom().bit(0));
        }
    }
}
