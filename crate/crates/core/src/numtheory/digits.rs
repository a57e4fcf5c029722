use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{NumError, Rational};

/// A finite, nonempty, duplicate-free set of rationals kept in ascending order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DigitSet {
    elements: Vec<Rational>,
}

impl DigitSet {
    /// Builds a set from distinct elements; duplicates are an error.
    pub fn new(elements: impl IntoIterator<Item = Rational>) -> Result<Self, NumError> {
        let mut elements: Vec<Rational> = elements.into_iter().collect();
        if elements.is_empty() {
            return Err(NumError::EmptyDigitSet);
        }
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(NumError::DuplicateDigit(w[0].clone()));
        }
        Ok(DigitSet { elements })
    }

    /// Builds a set, silently merging repeated elements.
    pub fn from_iter_dedup(elements: impl IntoIterator<Item = Rational>) -> Result<Self, NumError> {
        let set: BTreeSet<Rational> = elements.into_iter().collect();
        if set.is_empty() {
            return Err(NumError::EmptyDigitSet);
        }
        Ok(DigitSet {
            elements: set.into_iter().collect(),
        })
    }

    pub fn from_integers(elements: impl IntoIterator<Item = i64>) -> Result<Self, NumError> {
        Self::new(elements.into_iter().map(Rational::from_integer))
    }

    /// The consecutive digit set `{0, 1, ..., n-1}`; panics for `n == 0`.
    pub fn consecutive(n: u64) -> Self {
        assert!(n >= 1, "consecutive digit set needs n >= 1");
        DigitSet {
            elements: (0..n).map(Rational::from_integer).collect(),
        }
    }

    pub fn singleton(x: Rational) -> Self {
        DigitSet { elements: vec![x] }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.elements.iter()
    }

    pub fn min(&self) -> &Rational {
        &self.elements[0]
    }

    pub fn max(&self) -> &Rational {
        self.elements.last().expect("nonempty")
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn is_integral(&self) -> bool {
        self.elements.iter().all(Rational::is_integer)
    }

    /// Integer elements, or `None` if some element is not an integer.
    pub fn integers(&self) -> Option<Vec<BigInt>> {
        self.elements.iter().map(Rational::to_integer).collect()
    }

    /// `alpha * A + beta`; panics if `alpha == 0`.
    pub fn affine(&self, alpha: &Rational, beta: &Rational) -> Self {
        assert!(!alpha.is_zero(), "affine image with zero scale");
        let mut elements: Vec<Rational> = self.elements.iter().map(|a| alpha * a + beta).collect();
        if alpha.is_negative() {
            elements.reverse();
        }
        DigitSet { elements }
    }

    pub fn scaled(&self, alpha: &Rational) -> Self {
        self.affine(alpha, &Rational::zero())
    }

    /// `A ⊕ B`; fails if two pairs produce the same sum.
    pub fn direct_sum(&self, other: &DigitSet) -> Result<Self, NumError> {
        let sums = self
            .elements
            .iter()
            .flat_map(|a| other.elements.iter().map(move |b| a + b));
        DigitSet::new(sums).map_err(|e| match e {
            NumError::DuplicateDigit(x) => NumError::DirectSumCollision(x),
            other => other,
        })
    }

    /// Plain Minkowski sum with repeated sums merged.
    pub fn sumset(&self, other: &DigitSet) -> Self {
        let sums = self
            .elements
            .iter()
            .flat_map(|a| other.elements.iter().map(move |b| a + b));
        DigitSet::from_iter_dedup(sums).expect("sum of nonempty sets is nonempty")
    }

    /// If the set is `{start + step*i : 0 <= i < n}` with `step > 0` (or a
    /// singleton), returns `(start, step, n)`.
    pub fn as_progression(&self) -> Option<(Rational, Rational, usize)> {
        let n = self.len();
        let start = self.elements[0].clone();
        if n == 1 {
            return Some((start, Rational::one(), 1));
        }
        let step = &self.elements[1] - &self.elements[0];
        let is_ap = self
            .elements
            .windows(2)
            .all(|w| &w[1] - &w[0] == step);
        is_ap.then_some((start, step, n))
    }

    /// Least common denominator of the elements.
    pub fn common_denominator(&self) -> BigInt {
        self.elements
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> IntoIterator for &'a DigitSet {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// gcd of `∪ (A - A)` over all given integer digit sets.
pub fn gcd_diffsets(sets: &[DigitSet]) -> Result<BigInt, NumError> {
    let mut g = BigInt::zero();
    let mut saw_pair = false;
    for set in sets {
        let ints = set.integers().ok_or(NumError::NonIntegerDigits)?;
        let base = &ints[0];
        for x in &ints[1..] {
            saw_pair = true;
            g = g.gcd(&(x - base));
        }
    }
    if saw_pair {
        Ok(g)
    } else {
        Err(NumError::NoDifferences)
    }
}
