//! Fourier transforms of `μ = μ_1` and of the equivalent infinite
//! convolution `ν`, with certified truncation bounds.
//!
//! For `s_k = t / (b_1 ⋯ b_k)`:
//!
//! * `μ̂(t) = e^{-πit/b_1} Π_k f_k(s_k)` with
//!   `f_k(s) = (1/p_k) Σ_{j<p_k} cos((4j + 1 - 1/b_{k+1}) π s)`;
//! * `ν̂(t) = Π_k f_k(s_k/2) e^{πi c_k s_k}` with `c_k = 2p_k - (3 + 1/b_{k+1})/2`.
//!
//! Each omitted factor `a` of `μ̂` satisfies `0 <= 1 - a <= π² 2^{3-2k} t²`,
//! and factors lie in the unit disc, so dropping the levels `k > K` moves
//! the product by at most `S = π² 2^{3-2K} t² / 3` (reported as `e^S - 1`).
//! For `ν̂` the phases add `π |t| Σ_{k>K} c_k/(b_1⋯b_k) <= π |t| 2^{2-K}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::moran::{DiscreteMeasure, ParamSeq};
use crate::numtheory::Rational;

/// A complex value with a certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedValue {
    pub value: Complex64,
    pub error_bound: f64,
    pub truncation: usize,
}

impl BoundedValue {
    /// A bound above 2 says nothing about a value in the unit disc.
    pub fn is_vacuous(&self) -> bool {
        self.error_bound > 2.0
    }

    /// Whether `z` is within `error_bound + slack` of the value.
    pub fn admits(&self, z: Complex64, slack: f64) -> bool {
        (self.value - z).norm() <= self.error_bound + slack
    }
}

/// A real value with a certified absolute error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedReal {
    pub value: f64,
    pub error_bound: f64,
    pub truncation: usize,
    /// The exact partial sum behind `value`.
    pub partial_sum: Rational,
}

/// `f_k(t)`, summed form.
pub fn f_k(params: &ParamSeq, k: usize, t: f64) -> f64 {
    let p = params.p(k);
    let shift = 1.0 - 1.0 / params.b(k + 1) as f64;
    let sum: f64 = (0..p).map(|j| ((4 * j) as f64 + shift) * PI * t).map(f64::cos).sum();
    sum / p as f64
}

/// `f_k(t)` through `sin(2pπt) / (p sin 2πt) · cos((2p - 1 - 1/b_{k+1})πt)`;
/// `None` near `t ∈ Z/2`, where that form is singular.
pub fn f_k_factored(params: &ParamSeq, k: usize, t: f64) -> Option<f64> {
    let p = params.p(k) as f64;
    let denom = (2.0 * PI * t).sin();
    if denom.abs() < 1e-6 {
        return None;
    }
    let b = params.b(k + 1) as f64;
    Some((2.0 * p * PI * t).sin() / (p * denom) * ((2.0 * p - 1.0 - 1.0 / b) * PI * t).cos())
}

/// Number of levels whose factors can differ from 1 in double precision at
/// frequency `t`; beyond it every cosine argument is below `2^-27`.
fn active_levels(t: f64) -> f64 {
    36.0 + t.abs().max(1.0).log2().ceil()
}

/// Floating-point allowance for a product of up to `active_levels(t)` factors.
fn rounding_allowance(params: &ParamSeq, t: f64) -> f64 {
    let pmax = (1..=params.horizon()).map(|k| params.p(k)).max().unwrap_or(1) as f64;
    8.0 * (pmax + 2.0) * f64::EPSILON * (active_levels(t) + 2.0)
}

/// `Σ_{k>K} π² 2^{3-2k} t²`.
pub fn tail_sum(t: f64, truncation: usize) -> f64 {
    PI * PI * t * t * 2f64.powi(3 - 2 * truncation as i32) / 3.0
}

/// `μ̂(t)` truncated after `truncation` levels.
pub fn mu_hat(params: &ParamSeq, t: f64, truncation: usize) -> BoundedValue {
    assert!(truncation >= 1, "truncation must be at least 1");
    let mut s = t;
    let mut prod = 1.0f64;
    for k in 1..=truncation {
        s /= params.b(k) as f64;
        prod *= f_k(params, k, s);
    }
    let phase = Complex64::from_polar(1.0, -PI * t / params.b(1) as f64);
    let error_bound = if t == 0.0 {
        0.0
    } else {
        tail_sum(t, truncation).exp_m1() + rounding_allowance(params, t)
    };
    BoundedValue {
        value: phase * prod,
        error_bound,
        truncation,
    }
}

/// `ν̂(t)` truncated after `truncation` levels.
pub fn nu_hat(params: &ParamSeq, t: f64, truncation: usize) -> BoundedValue {
    assert!(truncation >= 1, "truncation must be at least 1");
    let mut s = t;
    let mut value = Complex64::new(1.0, 0.0);
    for k in 1..=truncation {
        s /= params.b(k) as f64;
        let c = 2.0 * params.p(k) as f64 - (3.0 + 1.0 / params.b(k + 1) as f64) / 2.0;
        value *= Complex64::from_polar(f_k(params, k, s / 2.0), PI * c * s);
    }
    let error_bound = if t == 0.0 {
        0.0
    } else {
        let phase_tail = PI * t.abs() * 2f64.powi(2 - truncation as i32);
        (tail_sum(t / 2.0, truncation) + phase_tail).exp_m1() + rounding_allowance(params, t)
    };
    BoundedValue {
        value,
        error_bound,
        truncation,
    }
}

/// `1/(2b_1) + Σ_{k<=K} c_k / (b_1 ⋯ b_k)`, exactly.
pub fn phase_constant_exact(params: &ParamSeq, truncation: usize) -> Rational {
    let mut sum = Rational::new(1, 2 * params.b(1));
    let mut scale = Rational::one();
    for k in 1..=truncation {
        scale = scale / Rational::from_integer(params.b(k));
        let b_next = Rational::from_integer(params.b(k + 1));
        let c = Rational::from_integer(2 * params.p(k))
            - (Rational::from_integer(3) + b_next.recip()) / Rational::from_integer(2);
        sum += &(c * &scale);
    }
    sum
}

/// The phase constant `b` with tail bound `2^{2-K}`.
pub fn phase_constant(params: &ParamSeq, truncation: usize) -> BoundedReal {
    assert!(truncation >= 1, "truncation must be at least 1");
    let partial_sum = phase_constant_exact(params, truncation);
    BoundedReal {
        value: partial_sum.to_f64(),
        error_bound: 2f64.powi(2 - truncation as i32) + 4.0 * f64::EPSILON,
        truncation,
        partial_sum,
    }
}

/// `|ν̂(t) - μ̂(t/2) e^{πi b t}|` and a certified bound for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceGap {
    pub t: f64,
    pub gap: f64,
    pub bound: f64,
}

/// Compares both sides of `ν̂(t) = μ̂(t/2) e^{πi b t}` at truncation `K`.
pub fn equivalence_gap(params: &ParamSeq, t: f64, truncation: usize) -> EquivalenceGap {
    let nu = nu_hat(params, t, truncation);
    let mu = mu_hat(params, t / 2.0, truncation);
    let b = phase_constant(params, truncation);
    let rhs = mu.value * Complex64::from_polar(1.0, PI * b.value * t);
    EquivalenceGap {
        t,
        gap: (nu.value - rhs).norm(),
        bound: nu.error_bound + mu.error_bound + PI * t.abs() * b.error_bound + 4.0 * f64::EPSILON,
    }
}

/// `∫ e^{2πitx} dm(x)`.
pub fn empirical_cf(m: &DiscreteMeasure, t: f64) -> Complex64 {
    m.characteristic(t)
}

/// [`empirical_cf`] on many frequencies, converting atoms once.
pub fn empirical_cf_many(m: &DiscreteMeasure, ts: &[f64]) -> Vec<Complex64> {
    let atoms = m.float_atoms();
    ts.par_iter()
        .map(|&t| {
            atoms
                .iter()
                .map(|&(x, w)| Complex64::from_polar(w, 2.0 * PI * t * x))
                .sum()
        })
        .collect()
}

/// `count` evenly spaced points from `t_min` to `t_max` inclusive.
pub fn grid(t_min: f64, t_max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![t_min],
        _ => (0..count)
            .map(|i| t_min + (t_max - t_min) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Smallest `K >= start` whose truncation bound at `|t| = t_abs` is below
/// `tolerance` for both transforms, or `None` if `max` levels do not suffice.
pub fn truncation_for_tolerance(
    params: &ParamSeq,
    t_abs: f64,
    tolerance: f64,
    start: usize,
    max: usize,
) -> Option<usize> {
    (start.max(1)..=max).find(|&k| {
        mu_hat(params, t_abs, k).error_bound < tolerance && nu_hat(params, t_abs, k).error_bound < tolerance
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moran::level_measure;
    use crate::numtheory::q;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bernoulli_b4() -> ParamSeq {
        ParamSeq::constant(4, 1).unwrap()
    }

    #[test]
    fn f_k_examples() {
        let s = ParamSeq::constant(8, 2).unwrap();
        assert_eq!(f_k(&s, 1, 0.0), 1.0);
        let b = bernoulli_b4();
        let t = 0.37;
        assert!((f_k(&b, 3, t) - ((1.0 - 0.25) * PI * t).cos()).abs() < 1e-15);
        let t = 1.0 / 3.0;
        let factored = (4.0 * PI * t).sin() / (2.0 * (2.0 * PI * t).sin()) * ((3.0 - 1.0 / 8.0) * PI * t).cos();
        assert!((f_k(&s, 1, t) - factored).abs() < 1e-14);
        assert!(f_k_factored(&s, 1, 0.5).is_none());
    }

    #[test]
    fn factored_form_matches_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let seqs: Vec<ParamSeq> = vec![
            ParamSeq::new(vec![], vec![8, 6, 10], vec![], vec![2, 3, 1]).unwrap(),
            ParamSeq::new(vec![12], vec![9, 14], vec![5], vec![4, 7]).unwrap(),
        ];
        let mut checked = 0usize;
        for _ in 0..1_000_000 {
            let s = &seqs[rng.gen_range(0..seqs.len())];
            let k = rng.gen_range(1..20);
            let t: f64 = rng.gen_range(-2.0..2.0);
            if (2.0 * PI * t).sin().abs() < 1e-2 {
                continue;
            }
            let fac = f_k_factored(s, k, t).unwrap();
            assert!((fac - f_k(s, k, t)).abs() < 1e-12, "k={k} t={t}");
            checked += 1;
        }
        assert!(checked > 980_000, "{checked}");
    }

    #[test]
    fn transforms_at_zero() {
        let s = ParamSeq::new(vec![7], vec![8, 6], vec![], vec![1, 3]).unwrap();
        for k in [1, 5, 40] {
            let m = mu_hat(&s, 0.0, k);
            assert_eq!(m.value, Complex64::new(1.0, 0.0));
            assert_eq!(m.error_bound, 0.0);
            let n = nu_hat(&s, 0.0, k);
            assert_eq!(n.value, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn phase_constant_converges() {
        let s = bernoulli_b4();
        let far = phase_constant(&s, 40);
        for k in [1, 2, 5, 10, 20] {
            let pk = phase_constant(&s, k);
            assert!((pk.value - far.value).abs() <= pk.error_bound);
        }
        // Every summand is positive, so partial sums increase.
        let mut prev = phase_constant_exact(&s, 1);
        for k in 2..12 {
            let next = phase_constant_exact(&s, k);
            assert!(next > prev);
            prev = next;
        }
        // 1/8 + (2 - 13/8)/4
        assert_eq!(phase_constant_exact(&s, 1), q(7, 32));
    }

    #[test]
    fn mu_hat_against_level_measure() {
        let s = ParamSeq::new(vec![5], vec![4, 6], vec![2], vec![1]).unwrap();
        let depth = 12;
        let m = level_measure(&s, 1, depth);
        for t in grid(-1.0, 1.0, 21) {
            let mh = mu_hat(&s, t, 20);
            let emp = empirical_cf(&m, t);
            let slack = 2.0 * PI * t.abs() * 2f64.powi(3 - depth as i32);
            assert!(mh.admits(emp, slack), "t={t}");
        }
    }

    fn params() -> impl Strategy<Value = ParamSeq> {
        (
            prop::collection::vec(1u64..5, 1..4),
            prop::collection::vec(0u64..5, 4),
        )
            .prop_map(|(ps, extra)| {
                let bs: Vec<u64> = ps.iter().zip(&extra).map(|(p, e)| 2 * p + e).collect();
                ParamSeq::new(vec![], bs, vec![], ps).unwrap()
            })
    }

    proptest! {
        #[test]
        fn transforms_lie_in_unit_disc(s in params(), t in -50.0f64..50.0, k in 1usize..30) {
            let m = mu_hat(&s, t, k);
            prop_assert!(m.value.norm() <= 1.0 + m.error_bound);
            let n = nu_hat(&s, t, k);
            prop_assert!(n.value.norm() <= 1.0 + n.error_bound);
            prop_assert!(f_k(&s, k, t).abs() <= 1.0 + 1e-15);
        }

        #[test]
        fn bounds_shrink_with_truncation(s in params(), t in -20.0f64..20.0, k in 1usize..40) {
            prop_assert!(mu_hat(&s, t, k + 1).error_bound <= mu_hat(&s, t, k).error_bound);
            prop_assert!(nu_hat(&s, t, k + 1).error_bound <= nu_hat(&s, t, k).error_bound);
        }

        #[test]
        fn truncations_are_mutually_consistent(s in params(), t in -8.0f64..8.0, k in 1usize..12) {
            let coarse = mu_hat(&s, t, k);
            let fine = mu_hat(&s, t, k + 30);
            prop_assert!(coarse.admits(fine.value, fine.error_bound));
            let coarse = nu_hat(&s, t, k);
            let fine = nu_hat(&s, t, k + 30);
            prop_assert!(coarse.admits(fine.value, fine.error_bound));
        }

        #[test]
        fn equivalence_within_bound(s in params(), t in -4.0f64..4.0, k in 2usize..30) {
            let g = equivalence_gap(&s, t, k);
            prop_assert!(g.gap <= g.bound, "{:?}", g);
        }

        #[test]
        fn nu_and_mu_have_equal_moduli(s in params(), t in -4.0f64..4.0) {
            let n = nu_hat(&s, t, 30);
            let m = mu_hat(&s, t / 2.0, 30);
            prop_assert!((n.value.norm() - m.value.norm()).abs() <= n.error_bound + m.error_bound);
        }
    }
}
