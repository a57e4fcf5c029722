use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::cyclotomic::roots_of_unity_sum_vanishes;
use super::{DigitSet, Rational};

/// `m_A(t) = (1/#A) Σ_{a∈A} e^{2πi a t}`.
pub fn mask_eval(set: &DigitSet, t: f64) -> Complex64 {
    let sum: Complex64 = set
        .iter()
        .map(|a| Complex64::from_polar(1.0, 2.0 * PI * a.to_f64() * t))
        .sum();
    sum / set.len() as f64
}

/// Whether `m_A(t) = 0`, decided without floating point.
///
/// Arithmetic progressions `β + α·D_n` reduce to the consecutive-digit rule
/// (`n·α·t ∈ Z` and `α·t ∉ Z`); every other set is tested as a vanishing sum
/// of roots of unity of order equal to the common denominator of `{a·t}`.
pub fn mask_zero_exact(set: &DigitSet, t: &Rational) -> bool {
    if set.len() == 1 {
        return false;
    }
    if let Some((_, step, n)) = set.as_progression() {
        let x = &step * t;
        let nx = &x * &Rational::from_integer(n as u64);
        return nx.is_integer() && !x.is_integer();
    }
    let phases: Vec<Rational> = set.iter().map(|a| (a * t).fract_positive()).collect();
    let modulus = phases
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let Some(m) = modulus.to_u64() else {
        panic!("root-of-unity order {modulus} is too large for the exact vanishing test");
    };
    let exponents: Vec<u64> = phases
        .iter()
        .map(|r| {
            (r.numer() * (&modulus / r.denom()))
                .to_u64()
                .expect("exponent below modulus")
        })
        .collect();
    roots_of_unity_sum_vanishes(&exponents, m)
}
