//! The infinite convolution `ν = δ_{b_1^{-1} 𝒟_1} * δ_{(b_1 b_2)^{-1} 𝒟_2} * ⋯`
//! in its three equivalent shapes: the original level factors, the
//! rearranged sequence `(b'_j, D'_j)` with every digit set of size at least
//! two, and the double-indexed sequence `(b''_j, D_{p''_j})`.
//!
//! Each `𝒟_k = D_{p_k} ⊕ o_k D_2` with `o_k = a_k / (2 b_{k+1})` and
//! `a_k = b_{k+1}(2p_k - 1) - 1`, so `δ_{(b_1⋯b_k)^{-1} 𝒟_k}` splits into a
//! consecutive part `C_k` at scale `1/(b_1⋯b_k)` and a pair part `P_k = a_k D_2`
//! at scale `1/(2 b_1⋯b_{k+1})`. Ordered by scale these read
//! `C_1, C_2, P_1, C_3, P_2, C_4, P_3, …`; dropping the singleton `C_k`
//! (those with `p_k = 1`) gives the rearranged sequence.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;

use crate::moran::{DiscreteMeasure, ParamSeq};
use crate::numtheory::{mask_eval, mask_zero_exact, DigitSet, NumError, Rational};

/// Which part of the original convolution a factor comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorOrigin {
    /// The whole `𝒟_k`.
    Level(usize),
    /// `D_{p_k}` split off from `𝒟_k`.
    Consecutive(usize),
    /// `a_k D_2` split off from `𝒟_k`.
    Pair(usize),
    /// The `j`-th entry of the double-indexed sequence.
    DoubleIndex(usize),
}

impl FactorOrigin {
    /// The original level the factor's data comes from.
    pub fn level(&self) -> usize {
        match *self {
            FactorOrigin::Level(k) | FactorOrigin::Consecutive(k) | FactorOrigin::Pair(k) => k,
            FactorOrigin::DoubleIndex(j) => {
                if j <= 2 {
                    j
                } else if j % 2 == 1 {
                    (j - 1) / 2
                } else {
                    j / 2 + 1
                }
            }
        }
    }
}

/// `δ_{scale · digits}`, with `digits` written as a direct sum of `components`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvolutionFactor {
    /// Cumulative scale `1/(b'_1 ⋯ b'_j)`.
    pub scale: Rational,
    /// `b'_j`, the ratio of the previous scale to this one.
    pub step: Rational,
    pub digits: DigitSet,
    pub components: Vec<DigitSet>,
    pub origin: FactorOrigin,
}

impl ConvolutionFactor {
    fn simple(scale: Rational, step: Rational, digits: DigitSet, origin: FactorOrigin) -> Self {
        ConvolutionFactor {
            scale,
            step,
            components: vec![digits.clone()],
            digits,
            origin,
        }
    }

    /// The atom set `scale · digits`.
    pub fn atoms(&self) -> DigitSet {
        self.digits.scaled(&self.scale)
    }

    /// Fourier transform of the factor, `m_{digits}(scale · t)`.
    pub fn transform(&self, t: f64) -> Complex64 {
        mask_eval(&self.digits, self.scale.to_f64() * t)
    }

    /// Exact zero test of [`ConvolutionFactor::transform`] at a rational point.
    pub fn vanishes_at(&self, t: &Rational) -> bool {
        let x = &self.scale * t;
        self.components.iter().any(|c| mask_zero_exact(c, &x))
    }
}

/// `b_{k+1}(2 p_k - 1) - 1`.
pub fn pair_multiplier(params: &ParamSeq, k: usize) -> u64 {
    params.b(k + 1) * (2 * params.p(k) - 1) - 1
}

/// `p_k - (1 + 1/b_{k+1})/2`.
pub fn pair_offset(params: &ParamSeq, k: usize) -> Rational {
    Rational::new(pair_multiplier(params, k), 2 * params.b(k + 1))
}

/// `𝒟_k = D_{p_k} ⊕ (p_k - (1 + 1/b_{k+1})/2) D_2`.
pub fn build_dk(params: &ParamSeq, k: usize) -> Result<DigitSet, NumError> {
    let pair = DigitSet::consecutive(2).scaled(&pair_offset(params, k));
    DigitSet::consecutive(params.p(k)).direct_sum(&pair)
}

/// `2 b_{k+1} 𝒟_k = {0, b_{k+1} - 1}` for `p_k = 1`.
pub fn bernoulli_digits(params: &ParamSeq, k: usize) -> Option<DigitSet> {
    (params.p(k) == 1).then(|| {
        DigitSet::from_integers([0, params.b(k + 1) as i64 - 1]).expect("b >= 2 gives two digits")
    })
}

/// The first `levels` factors `δ_{(b_1⋯b_k)^{-1} 𝒟_k}`.
pub fn original_factors(params: &ParamSeq, levels: usize) -> Vec<ConvolutionFactor> {
    let mut scale = Rational::one();
    (1..=levels)
        .map(|k| {
            let step = Rational::from_integer(params.b(k));
            scale = &scale / &step;
            let consecutive = DigitSet::consecutive(params.p(k));
            let pair = DigitSet::consecutive(2).scaled(&pair_offset(params, k));
            let digits = build_dk(params, k).expect("offset is not an integer, so the sum is direct");
            ConvolutionFactor {
                scale: scale.clone(),
                step,
                digits,
                components: vec![consecutive, pair],
                origin: FactorOrigin::Level(k),
            }
        })
        .collect()
}

/// Scale-ordered split factors `C_1, C_2, P_1, C_3, P_2, …` with singletons
/// dropped, as `(origin, cumulative scale, digits)`.
struct SplitFactors<'a> {
    params: &'a ParamSeq,
    /// Next entry: 0 for `C_1`, 1 for `C_2`, then `2k` for `P_k` and `2k + 1` for `C_{k+2}`.
    cursor: usize,
}

impl<'a> SplitFactors<'a> {
    fn new(params: &'a ParamSeq) -> Self {
        SplitFactors { params, cursor: 0 }
    }
}

impl Iterator for SplitFactors<'_> {
    type Item = (FactorOrigin, Rational, DigitSet);

    fn next(&mut self) -> Option<Self::Item> {
        let s = self.params;
        loop {
            let c = self.cursor;
            self.cursor += 1;
            let (origin, k) = match c {
                0 => (FactorOrigin::Consecutive(1), 1),
                1 => (FactorOrigin::Consecutive(2), 2),
                _ if c % 2 == 0 => (FactorOrigin::Pair(c / 2), c / 2),
                _ => (FactorOrigin::Consecutive((c + 3) / 2), (c + 3) / 2),
            };
            match origin {
                FactorOrigin::Consecutive(_) => {
                    if s.p(k) == 1 {
                        continue;
                    }
                    let scale = Rational::new(BigInt::one(), s.b_product(k));
                    return Some((origin, scale, DigitSet::consecutive(s.p(k))));
                }
                _ => {
                    let scale = Rational::new(BigInt::one(), s.b_product(k + 1) * 2);
                    let a = pair_multiplier(s, k) as i64;
                    return Some((origin, scale, DigitSet::from_integers([0, a]).expect("a >= 1")));
                }
            }
        }
    }
}

/// The relabelled sequence `(b'_j, D'_j)` with the positions `m_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RearrangedSeq {
    pub factors: Vec<ConvolutionFactor>,
    /// `k ↦ m_k` (1-based factor position) for the levels `k >= 3` present.
    pub m_index: BTreeMap<usize, usize>,
}

impl RearrangedSeq {
    fn from_split(items: Vec<(FactorOrigin, Rational, DigitSet)>) -> Self {
        let mut factors = Vec::with_capacity(items.len());
        let mut m_index = BTreeMap::new();
        let mut prev = Rational::one();
        for (origin, scale, digits) in items {
            let step = &prev / &scale;
            prev = scale.clone();
            let pos = factors.len() + 1;
            match origin {
                FactorOrigin::Consecutive(k) if k >= 3 => {
                    m_index.insert(k, pos);
                }
                // With p_{k+1} = 1 the group for level k+1 starts with P_k.
                FactorOrigin::Pair(k) if k >= 2 => {
                    m_index.entry(k + 1).or_insert(pos);
                }
                _ => {}
            }
            factors.push(ConvolutionFactor::simple(scale, step, digits, origin));
        }
        RearrangedSeq { factors, m_index }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `b'_1, b'_2, …`.
    pub fn steps(&self) -> Vec<Rational> {
        self.factors.iter().map(|f| f.step.clone()).collect()
    }
}

/// `m_k = 2k - 2 - #{n < k : p_n = 1}`.
pub fn m_index(params: &ParamSeq, k: usize) -> usize {
    let ones = (1..k).filter(|&n| params.p(n) == 1).count();
    2 * k - 2 - ones
}

/// The rearranged factors coming from levels `1..=levels`: every `C_k` and
/// `P_k` with `k <= levels`. Their convolution equals the first `levels`
/// original factors. Panics if `levels < 2`.
pub fn rearrange(params: &ParamSeq, levels: usize) -> RearrangedSeq {
    assert!(levels >= 2, "rearrangement needs at least two levels");
    let items: Vec<_> = SplitFactors::new(params)
        .take_while(|(o, _, _)| *o != FactorOrigin::Pair(levels + 1))
        .filter(|(o, _, _)| o.level() <= levels)
        .collect();
    RearrangedSeq::from_split(items)
}

/// The first `count` factors of the infinite rearranged sequence.
pub fn rearranged_prefix(params: &ParamSeq, count: usize) -> RearrangedSeq {
    RearrangedSeq::from_split(SplitFactors::new(params).take(count).collect())
}

/// `b''_j` for `j >= 1`.
pub fn double_index_step(params: &ParamSeq, j: usize) -> Rational {
    assert!(j >= 1);
    match j {
        1 => Rational::from_integer(params.b(1)),
        2 => Rational::from_integer(params.b(2)),
        _ if j % 2 == 1 => Rational::new(2, pair_multiplier(params, (j - 1) / 2)),
        _ => {
            let k = (j - 2) / 2;
            Rational::new(params.b(k + 2) * pair_multiplier(params, k), 2)
        }
    }
}

/// `p''_j` for `j >= 1`.
pub fn double_index_p(params: &ParamSeq, j: usize) -> u64 {
    match j {
        1 | 2 => params.p(j),
        _ if j % 2 == 1 => 2,
        _ => params.p((j - 2) / 2 + 2),
    }
}

/// The first `count` factors `δ_{(b''_1⋯b''_j)^{-1} D_{p''_j}}`.
pub fn double_index(params: &ParamSeq, count: usize) -> RearrangedSeq {
    let mut scale = Rational::one();
    let factors = (1..=count)
        .map(|j| {
            let step = double_index_step(params, j);
            scale = &scale / &step;
            ConvolutionFactor::simple(
                scale.clone(),
                step,
                DigitSet::consecutive(double_index_p(params, j)),
                FactorOrigin::DoubleIndex(j),
            )
        })
        .collect();
    RearrangedSeq {
        factors,
        m_index: BTreeMap::new(),
    }
}

/// Exact convolution of the first `count` factors.
pub fn finite_convolution(factors: &[ConvolutionFactor], count: usize) -> DiscreteMeasure {
    assert!(count <= factors.len(), "asked for {count} of {} factors", factors.len());
    factors[..count]
        .iter()
        .fold(DiscreteMeasure::dirac(&Rational::zero()), |acc, f| {
            acc.convolve(&DiscreteMeasure::uniform(&f.atoms()))
        })
}

/// `ω_{>k}` truncated to `extra` factors: the factors `k+1, …, k+extra`
/// rescaled by `b'_1 ⋯ b'_k`.
pub fn omega_tail(seq: &RearrangedSeq, k: usize, extra: usize) -> DiscreteMeasure {
    finite_convolution(&omega_factors(seq, k, extra), extra)
}

/// The factors of [`omega_tail`].
pub fn omega_factors(seq: &RearrangedSeq, k: usize, extra: usize) -> Vec<ConvolutionFactor> {
    assert!(extra >= 1, "the tail needs at least one factor");
    assert!(k + extra <= seq.len(), "sequence has only {} factors", seq.len());
    let base = if k == 0 {
        Rational::one()
    } else {
        seq.factors[k - 1].scale.clone()
    };
    seq.factors[k..k + extra]
        .iter()
        .map(|f| ConvolutionFactor {
            scale: &f.scale / &base,
            ..f.clone()
        })
        .collect()
}
