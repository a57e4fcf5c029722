use std::fmt;

use serde::Serialize;

use crate::moran::ParamSeq;

/// A single divisibility statement `divisor | dividend`, with display names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Divisibility {
    pub k: usize,
    pub divisor_name: String,
    pub divisor: u64,
    pub dividend_name: String,
    pub dividend: u64,
}

impl Divisibility {
    fn new(k: usize, divisor_name: String, divisor: u64, dividend_name: String, dividend: u64) -> Self {
        Divisibility {
            k,
            divisor_name,
            divisor,
            dividend_name,
            dividend,
        }
    }

    pub fn holds(&self) -> bool {
        self.dividend % self.divisor == 0
    }

    /// `2 | b_k`.
    pub fn two_divides_b(params: &ParamSeq, k: usize) -> Self {
        Self::new(k, "2".into(), 2, format!("b_{k}"), params.b(k))
    }

    /// `n_2 | 2 b_2`.
    pub fn n2_divides_2b2(params: &ParamSeq) -> Self {
        Self::new(2, "n_2".into(), params.n(2), "2b_2".into(), 2 * params.b(2))
    }

    /// `n_k | b_k`.
    pub fn n_divides_b(params: &ParamSeq, k: usize) -> Self {
        Self::new(k, format!("n_{k}"), params.n(k), format!("b_{k}"), params.b(k))
    }

    /// `p_k | b_k`.
    pub fn p_divides_b(params: &ParamSeq, k: usize) -> Self {
        Self::new(k, format!("p_{k}"), params.p(k), format!("b_{k}"), params.b(k))
    }
}

impl fmt::Display for Divisibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.holds() { "|" } else { "∤" };
        if self.divisor_name == self.divisor.to_string() {
            write!(f, "{} {} {}={}", self.divisor, rel, self.dividend_name, self.dividend)
        } else {
            write!(
                f,
                "{}={} {} {}={}",
                self.divisor_name, self.divisor, rel, self.dividend_name, self.dividend
            )
        }
    }
}

/// Indices `from..=last` such that a condition on `(b_k, p_k)` checked there
/// holds for every `k >= from`.
pub fn check_range(params: &ParamSeq, from: usize) -> std::ops::RangeInclusive<usize> {
    let start = from.max(params.joint_prefix_len() + 1);
    from..=start + params.joint_period() - 1
}

/// `n_2 | 2b_2` and `n_k | b_k` for all `k >= 3`.
pub fn characterization_conditions(params: &ParamSeq) -> Vec<Divisibility> {
    std::iter::once(Divisibility::n2_divides_2b2(params))
        .chain(check_range(params, 3).map(|k| Divisibility::n_divides_b(params, k)))
        .collect()
}

/// `2 | b_2`, `n_2 | 2b_2` and `n_k | b_k` for all `k >= 3`.
pub fn sufficient_conditions(params: &ParamSeq) -> Vec<Divisibility> {
    std::iter::once(Divisibility::two_divides_b(params, 2))
        .chain(characterization_conditions(params))
        .collect()
}

/// Failing conditions among `p_1 | b_1`, `2 | b_2`, `p_2 | b_2`, `2p_k | b_k`
/// for `3 <= k <= levels`.
pub fn triple_guards(params: &ParamSeq, levels: usize) -> Vec<Divisibility> {
    let mut all = vec![Divisibility::p_divides_b(params, 1)];
    if levels >= 2 {
        all.push(Divisibility::two_divides_b(params, 2));
        all.push(Divisibility::n2_divides_2b2(params));
    }
    all.extend((3..=levels).map(|k| Divisibility::n_divides_b(params, k)));
    all.into_iter().filter(|d| !d.holds()).collect()
}

/// Result of checking `2 | b_k` for every `k >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenScales {
    pub holds: bool,
    /// First `(k, b_k)` with odd `b_k`.
    pub witness: Option<(usize, u64)>,
}

/// Whether `2 | b_k` for all `k >= 2`; a spectral measure with every `p_k`
/// even needs this.
pub fn even_b_necessity(params: &ParamSeq) -> EvenScales {
    let witness = check_range(params, 2)
        .find(|&k| params.b(k) % 2 == 1)
        .map(|k| (k, params.b(k)));
    EvenScales {
        holds: witness.is_none(),
        witness,
    }
}
