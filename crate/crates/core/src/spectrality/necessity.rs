use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::guards::check_range;
use super::SpectralityError;
use crate::convolution::{double_index, rearranged_prefix};
use crate::moran::ParamSeq;
use crate::numtheory::gcd_diffsets;

/// Which of the two divisibility consequences an entry comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Consequence {
    /// `γ_i ∤ t_{i+1}` forces `γ_{i+1} | l_{i+1}`.
    Single,
    /// With additionally `gcd(l_{i+1}, t_{i+1}) = 1`, `t_{i+2} = 1` and
    /// `t_{i+1} | l_{i+2}`: `t_{i+1} γ_{i+2} | l_{i+2}`.
    Double,
}

/// A conclusion that must hold for spectrality, at index `i` (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Implication {
    pub i: usize,
    pub consequence: Consequence,
    pub divisor: BigInt,
    pub dividend: BigInt,
    pub holds: bool,
}

impl std::fmt::Display for Implication {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (rel, name) = match self.consequence {
            Consequence::Single => ("γ", format!("l_{}", self.i + 1)),
            Consequence::Double => ("t·γ", format!("l_{}", self.i + 2)),
        };
        let sym = if self.holds { "|" } else { "∤" };
        write!(f, "i={}: {}={} {} {}={}", self.i, rel, self.divisor, sym, name, self.dividend)
    }
}

fn divides(a: &BigInt, b: &BigInt) -> bool {
    !a.is_zero() && (b % a).is_zero()
}

/// Evaluates both consequences at every index where their hypotheses hold.
///
/// `d[k] = (l_k, t_k)` must be in lowest terms with `t_k > 0`; `gamma[k] >= 2`.
pub fn divisibility_extraction(d: &[(BigInt, BigInt)], gamma: &[u64]) -> Result<Vec<Implication>, SpectralityError> {
    if d.len() != gamma.len() {
        return Err(SpectralityError::LengthMismatch { d: d.len(), gamma: gamma.len() });
    }
    for (idx, (l, t)) in d.iter().enumerate() {
        if !t.is_positive() || !l.gcd(t).is_one() {
            return Err(SpectralityError::NotReduced { index: idx + 1 });
        }
    }
    if let Some(idx) = gamma.iter().position(|&g| g < 2) {
        return Err(SpectralityError::GammaTooSmall { index: idx + 1 });
    }
    let g: Vec<BigInt> = gamma.iter().map(|&x| BigInt::from(x)).collect();
    let mut out = Vec::new();
    for i in 0..d.len().saturating_sub(1) {
        let (l1, t1) = &d[i + 1];
        if divides(&g[i], t1) {
            continue;
        }
        out.push(Implication {
            i: i + 1,
            consequence: Consequence::Single,
            divisor: g[i + 1].clone(),
            dividend: l1.clone(),
            holds: divides(&g[i + 1], l1),
        });
        if let Some((l2, t2)) = d.get(i + 2) {
            if l1.gcd(t1).is_one() && t2.is_one() && divides(t1, l2) {
                let divisor = t1 * &g[i + 2];
                out.push(Implication {
                    i: i + 1,
                    consequence: Consequence::Double,
                    holds: divides(&divisor, l2),
                    divisor,
                    dividend: l2.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Number of original levels whose conditions the chain must see.
fn chain_levels(params: &ParamSeq) -> usize {
    *check_range(params, 3).end() + 1
}

/// The consequences applied to the double-indexed rewrite of `ν`, covering
/// every original level up to one full period past the prefix.
pub fn necessity_chain(params: &ParamSeq) -> Result<Vec<Implication>, SpectralityError> {
    let count = 2 * chain_levels(params);
    let seq = double_index(params, count);
    let d: Vec<(BigInt, BigInt)> = seq
        .factors
        .iter()
        .map(|f| (f.step.numer().clone(), f.step.denom().clone()))
        .collect();
    let gamma: Vec<u64> = seq.factors.iter().map(|f| f.digits.len() as u64).collect();
    divisibility_extraction(&d, &gamma)
}

/// `lcm` of all `t_k` and `γ_k` of the double-indexed rewrite over the prefix and one period.
pub fn default_modulus(params: &ParamSeq) -> BigInt {
    let seq = double_index(params, 2 * chain_levels(params));
    seq.factors.iter().fold(BigInt::one(), |acc, f| {
        acc.lcm(f.step.denom()).lcm(&BigInt::from(f.digits.len()))
    })
}

/// `gcd(∪_{j>l} (D'_j - D'_j))` over enough rearranged factors to cover a
/// full period; `1` means the integral periodic zero set of `ω_{>l}` is empty.
pub fn tail_difference_gcd(params: &ParamSeq, l: usize) -> BigInt {
    let span = 2 * (params.horizon() + 2);
    let seq = rearranged_prefix(params, l + span);
    let sets: Vec<_> = seq.factors[l..].iter().map(|f| f.digits.clone()).collect();
    gcd_diffsets(&sets).expect("rearranged digit sets have at least two elements")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrality::guards::characterization_conditions;
    use proptest::prelude::*;

    fn pair(l: i64, t: i64) -> (BigInt, BigInt) {
        (BigInt::from(l), BigInt::from(t))
    }

    #[test]
    fn single_consequence_examples() {
        let out = divisibility_extraction(&[pair(8, 1), pair(6, 23)], &[4, 4]).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].consequence, Consequence::Single);
        assert_eq!((out[0].divisor.clone(), out[0].dividend.clone()), (BigInt::from(4), BigInt::from(6)));
        assert!(!out[0].holds);
        let none = divisibility_extraction(&[pair(8, 1), pair(3, 8)], &[4, 4]).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn double_consequence_example() {
        // γ_1 = 4 ∤ t_2 = 3, gcd(2, 3) = 1, d_3 = 12 with 3 | 12: needs 3·4 | 12.
        let out = divisibility_extraction(&[pair(8, 1), pair(2, 3), pair(12, 1)], &[4, 2, 4]).unwrap();
        let dbl: Vec<_> = out.iter().filter(|x| x.consequence == Consequence::Double).collect();
        assert_eq!(dbl.len(), 1);
        assert_eq!(dbl[0].divisor, BigInt::from(12));
        assert!(dbl[0].holds);
        let bad = divisibility_extraction(&[pair(8, 1), pair(2, 3), pair(6, 1)], &[4, 2, 4]).unwrap();
        assert!(bad.iter().any(|x| x.consequence == Consequence::Double && !x.holds));
    }

    #[test]
    fn input_validation() {
        assert_eq!(
            divisibility_extraction(&[pair(4, 2)], &[2]),
            Err(SpectralityError::NotReduced { index: 1 })
        );
        assert_eq!(
            divisibility_extraction(&[pair(4, 1)], &[1]),
            Err(SpectralityError::GammaTooSmall { index: 1 })
        );
        assert!(matches!(
            divisibility_extraction(&[pair(4, 1)], &[2, 2]),
            Err(SpectralityError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn chain_on_worked_parameters() {
        let good = ParamSeq::constant(8, 2).unwrap();
        assert!(necessity_chain(&good).unwrap().iter().all(|x| x.holds));
        let bad = ParamSeq::with_b(vec![8, 8, 6], vec![8], 2).unwrap();
        let chain = necessity_chain(&bad).unwrap();
        let failing: Vec<_> = chain.iter().filter(|x| !x.holds).collect();
        // 2p_3 = 4 ∤ b_3 = 6 seen at i = 2, and p_3 = 2 ∤ b_3 a_1 / 2 = 69 at i = 3.
        assert_eq!(failing.len(), 2);
        assert_eq!((failing[0].i, failing[0].consequence), (2, Consequence::Double));
        assert_eq!((failing[1].i, failing[1].consequence), (3, Consequence::Single));
        assert_eq!(failing[1].dividend, BigInt::from(69));
        assert_eq!(default_modulus(&good), BigInt::from(46));
    }

    #[test]
    fn gcd_test() {
        let s = ParamSeq::constant(8, 2).unwrap();
        assert_eq!(tail_difference_gcd(&s, 3), BigInt::one());
        let b = ParamSeq::constant(8, 1).unwrap();
        // Every factor is {0, 7}.
        assert_eq!(tail_difference_gcd(&b, 1), BigInt::from(7));
    }

    fn even_params() -> impl Strategy<Value = ParamSeq> {
        (
            prop::collection::vec((1u64..3, 0u64..4), 0..3),
            prop::collection::vec((1u64..3, 0u64..4), 1..3),
        )
            .prop_map(|(pre, per)| {
                let split = |v: &[(u64, u64)]| -> (Vec<u64>, Vec<u64>) {
                    v.iter().map(|&(h, e)| (4 * h + 2 * e, 2 * h)).unzip()
                };
                let (bp, pp) = split(&pre);
                let (bq, pq) = split(&per);
                ParamSeq::new(bp, bq, pp, pq).unwrap()
            })
    }

    proptest! {
        #[test]
        fn chain_violation_iff_divisibility_fails(s in even_params()) {
            let chain_ok = necessity_chain(&s).unwrap().iter().all(|x| x.holds);
            let div_ok = characterization_conditions(&s).iter().all(|d| d.holds());
            prop_assert_eq!(chain_ok, div_ok, "{:?}", s);
        }
    }
}
