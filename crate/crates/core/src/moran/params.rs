use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// The defining sequences `{b_k}` and `{p_k}` (with `n_k = 2 p_k`), each
/// stored as a finite prefix followed by a repeating period.
///
/// Indices are 1-based throughout, matching the level numbering of the maps.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamSeq {
    b_prefix: Vec<u64>,
    b_period: Vec<u64>,
    p_prefix: Vec<u64>,
    p_period: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("{0} period must be nonempty")]
    EmptyPeriod(&'static str),
    #[error("p_{k} = 0, but every p_k must be at least 1")]
    ZeroDigitParameter { k: usize },
    #[error("b_{k} = {b} < n_{k} = {n}")]
    ScaleBelowDigitCount { k: usize, b: u64, n: u64 },
}

impl ParamSeq {
    pub fn new(
        b_prefix: Vec<u64>,
        b_period: Vec<u64>,
        p_prefix: Vec<u64>,
        p_period: Vec<u64>,
    ) -> Result<Self, ParamError> {
        if b_period.is_empty() {
            return Err(ParamError::EmptyPeriod("b"));
        }
        if p_period.is_empty() {
            return Err(ParamError::EmptyPeriod("p"));
        }
        let seq = ParamSeq {
            b_prefix,
            b_period,
            p_prefix,
            p_period,
        };
        for k in 1..=seq.horizon() {
            let (b, p) = (seq.b(k), seq.p(k));
            if p == 0 {
                return Err(ParamError::ZeroDigitParameter { k });
            }
            if b < 2 * p {
                return Err(ParamError::ScaleBelowDigitCount { k, b, n: 2 * p });
            }
        }
        Ok(seq)
    }

    /// Constant sequences `b_k ≡ b`, `p_k ≡ p`.
    pub fn constant(b: u64, p: u64) -> Result<Self, ParamError> {
        Self::new(vec![], vec![b], vec![], vec![p])
    }

    /// Purely periodic `p ≡ p` with the given `b` prefix and period.
    pub fn with_b(b_prefix: Vec<u64>, b_period: Vec<u64>, p: u64) -> Result<Self, ParamError> {
        Self::new(b_prefix, b_period, vec![], vec![p])
    }

    fn lookup(prefix: &[u64], period: &[u64], k: usize) -> u64 {
        assert!(k >= 1, "levels are 1-based");
        let i = k - 1;
        if i < prefix.len() {
            prefix[i]
        } else {
            period[(i - prefix.len()) % period.len()]
        }
    }

    pub fn b(&self, k: usize) -> u64 {
        Self::lookup(&self.b_prefix, &self.b_period, k)
    }

    pub fn p(&self, k: usize) -> u64 {
        Self::lookup(&self.p_prefix, &self.p_period, k)
    }

    /// Number of maps at level `k`.
    pub fn n(&self, k: usize) -> u64 {
        2 * self.p(k)
    }

    /// Length of the joint prefix: from this index on both sequences are periodic.
    pub fn joint_prefix_len(&self) -> usize {
        self.b_prefix.len().max(self.p_prefix.len())
    }

    pub fn joint_period(&self) -> usize {
        self.b_period.len().lcm(&self.p_period.len())
    }

    /// Indices `1..=horizon()` cover the joint prefix and one joint period, so
    /// any condition on `(b_k, p_k, b_{k+1})` that holds there holds for all `k`.
    pub fn horizon(&self) -> usize {
        self.joint_prefix_len() + self.joint_period()
    }

    pub fn b_prefix(&self) -> &[u64] {
        &self.b_prefix
    }

    pub fn b_period(&self) -> &[u64] {
        &self.b_period
    }

    pub fn p_prefix(&self) -> &[u64] {
        &self.p_prefix
    }

    pub fn p_period(&self) -> &[u64] {
        &self.p_period
    }

    /// `p_k = 1` for every `k`.
    pub fn is_bernoulli(&self) -> bool {
        self.p_prefix.iter().chain(&self.p_period).all(|&p| p == 1)
    }

    pub fn all_p_even(&self) -> bool {
        self.p_prefix.iter().chain(&self.p_period).all(|&p| p % 2 == 0)
    }

    /// The same sequences with each period written out `times` times.
    pub fn unrolled(&self, times: usize) -> Self {
        assert!(times >= 1);
        let rep = |v: &[u64]| v.iter().copied().cycle().take(v.len() * times).collect();
        ParamSeq {
            b_prefix: self.b_prefix.clone(),
            b_period: rep(&self.b_period),
            p_prefix: self.p_prefix.clone(),
            p_period: rep(&self.p_period),
        }
    }

    /// `b_1 ⋯ b_k`.
    pub fn b_product(&self, k: usize) -> num_bigint::BigInt {
        (1..=k).map(|i| num_bigint::BigInt::from(self.b(i))).product()
    }
}

impl fmt::Debug for ParamSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ParamSeq {{ b: {:?}({:?})*, p: {:?}({:?})* }}",
            self.b_prefix, self.b_period, self.p_prefix, self.p_period
        )
    }
}
