use serde::Serialize;

use super::SpectralityError;
use crate::moran::ParamSeq;
use crate::numtheory::v2_u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SValue {
    pub k: usize,
    pub value: i64,
}

fn v2(n: u64) -> i64 {
    v2_u64(n).finite().expect("nonzero argument")
}

fn s_raw(params: &ParamSeq, k: usize) -> i64 {
    (1..=k + 1).map(|i| v2(params.b(i))).sum::<i64>() - v2(params.b(k + 1) - 1)
}

/// `s_k = v_2(b_1 ⋯ b_{k+1} / (b_{k+1} - 1))`.
pub fn bernoulli_s(params: &ParamSeq, k: usize) -> Result<SValue, SpectralityError> {
    if !params.is_bernoulli() {
        return Err(SpectralityError::NotBernoulli);
    }
    if k == 0 {
        return Err(SpectralityError::IndexZero);
    }
    Ok(SValue { k, value: s_raw(params, k) })
}

/// Outcome of the distinctness decision for all `s_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Distinctness {
    pub distinct: bool,
    /// `s_1, …, s_W` for the decided window `W`.
    pub values: Vec<SValue>,
    /// Earliest `(i, j)`, `i < j`, with `s_i = s_j`.
    pub collision: Option<(usize, usize)>,
}

fn first_collision(values: &[SValue]) -> Option<(usize, usize)> {
    values.iter().enumerate().find_map(|(j, sj)| {
        values[..j]
            .iter()
            .find(|si| si.value == sj.value)
            .map(|si| (si.k, sj.k))
    })
}

/// Whether the `s_k` are pairwise distinct over all `k >= 1`.
///
/// From `k0 = max(1, #prefix)` on, `s_{k+P} = s_k + σ` with `σ` the period sum
/// of `v_2(b)`. For `σ = 0` values repeat. For `σ > 0` each residue class
/// increases, and the window `k0 + (J+1)P - 1` catches every collision once
/// `min_{residues} s + Jσ` exceeds every earlier value.
pub fn bernoulli_distinct(params: &ParamSeq) -> Result<Distinctness, SpectralityError> {
    if !params.is_bernoulli() {
        return Err(SpectralityError::NotBernoulli);
    }
    let p = params.b_period().len();
    let k0 = params.b_prefix().len().max(1);
    let sigma: i64 = params.b_period().iter().map(|&b| v2(b)).sum();
    let window = if sigma == 0 {
        k0 + p
    } else {
        let head_max = (1..k0 + p).map(|k| s_raw(params, k)).max().expect("k0 >= 1");
        let tail_min = (k0..k0 + p).map(|k| s_raw(params, k)).min().expect("p >= 1");
        let gap = head_max - tail_min;
        let j = if gap < 0 { 0 } else { gap / sigma + 1 };
        k0 + (j as usize + 1) * p - 1
    };
    let values: Vec<SValue> = (1..=window).map(|k| SValue { k, value: s_raw(params, k) }).collect();
    let collision = first_collision(&values);
    debug_assert!(sigma > 0 || collision.is_some());
    Ok(Distinctness {
        distinct: collision.is_none(),
        values,
        collision,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_values() {
        let s = ParamSeq::with_b(vec![8, 8, 7], vec![8], 1).unwrap();
        let got: Vec<i64> = (1..=10).map(|k| bernoulli_s(&s, k).unwrap().value).collect();
        let mut want = vec![6, 5];
        want.extend((3..=10).map(|k| 3 * k));
        assert_eq!(got, want);
        let d = bernoulli_distinct(&s).unwrap();
        assert!(d.distinct);
        assert_eq!(d.values.iter().map(|v| v.value).collect::<Vec<_>>(), vec![6, 5, 9, 12]);
    }

    #[test]
    fn odd_constant_collides() {
        let s = ParamSeq::constant(3, 1).unwrap();
        let d = bernoulli_distinct(&s).unwrap();
        assert!(!d.distinct);
        assert_eq!(d.collision, Some((1, 2)));
        assert_eq!(bernoulli_s(&ParamSeq::constant(8, 2).unwrap(), 1), Err(SpectralityError::NotBernoulli));
    }

    #[test]
    fn even_constants_are_distinct() {
        for b in [4, 6, 8, 10] {
            let s = ParamSeq::constant(b, 1).unwrap();
            assert!(bernoulli_distinct(&s).unwrap().distinct, "b = {b}");
        }
    }

    fn bernoulli_params() -> impl Strategy<Value = ParamSeq> {
        (
            prop::collection::vec(2u64..20, 0..4),
            prop::collection::vec(2u64..20, 1..4),
        )
            .prop_map(|(pre, per)| ParamSeq::with_b(pre, per, 1).unwrap())
    }

    proptest! {
        #[test]
        fn window_decision_matches_long_scan(s in bernoulli_params()) {
            let d = bernoulli_distinct(&s).unwrap();
            let long: Vec<SValue> = (1..=200).map(|k| bernoulli_s(&s, k).unwrap()).collect();
            prop_assert_eq!(d.distinct, first_collision(&long).is_none());
            if let Some(c) = d.collision {
                prop_assert_eq!(Some(c), first_collision(&long));
            }
        }

        #[test]
        fn unrolling_keeps_decision(s in bernoulli_params()) {
            prop_assert_eq!(
                bernoulli_distinct(&s).unwrap().distinct,
                bernoulli_distinct(&s.unrolled(2)).unwrap().distinct
            );
        }
    }
}
