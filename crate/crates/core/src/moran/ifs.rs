use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{DiscreteMeasure, MeasureDiff, ParamSeq};
use crate::numtheory::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoranError {
    #[error("levels start at 1")]
    LevelZero,
    #[error("digit {digit} at level {level} is outside [0, {max}]", max = .count - 1)]
    DigitOutOfRange { level: usize, digit: u64, count: u64 },
    #[error("starting point {0} lies outside [-2, 2]")]
    StartOutOfRange(Rational),
    #[error("refinement needs depth at least 1")]
    DepthZero,
}

/// `φ_{k,i}(x) = (-1)^i (x + i) / b_k`.
pub fn apply_map(params: &ParamSeq, k: usize, i: u64, x: &Rational) -> Result<Rational, MoranError> {
    if k == 0 {
        return Err(MoranError::LevelZero);
    }
    let n = params.n(k);
    if i >= n {
        return Err(MoranError::DigitOutOfRange { level: k, digit: i, count: n });
    }
    let y = (x + &Rational::from_integer(i)) / Rational::from_integer(params.b(k));
    Ok(if i % 2 == 1 { -y } else { y })
}

/// `φ_{k,j_k} ∘ φ_{k+1,j_{k+1}} ∘ ⋯ (x0)` over the given word.
pub fn compose_path(
    params: &ParamSeq,
    k: usize,
    digits: &[u64],
    x0: &Rational,
) -> Result<Rational, MoranError> {
    if x0.abs() > Rational::from_integer(2) {
        return Err(MoranError::StartOutOfRange(x0.clone()));
    }
    let mut x = x0.clone();
    for (offset, &d) in digits.iter().enumerate().rev() {
        x = apply_map(params, k + offset, d, &x)?;
    }
    Ok(x)
}

/// Upper bound on how far a depth-`depth` word image can be from the attractor.
pub fn depth_position_error(depth: usize) -> f64 {
    2f64.powi(3 - depth as i32)
}

/// Atoms of `μ_k` unrolled `depth` times with `μ_{k+depth}` replaced by `δ_0`.
///
/// Words are enumerated depth-first. With `D = b_k ⋯ b_{k+L-1}`, a word
/// contributes `Σ_i σ_i j_i (b_{i+1} ⋯ b_{k+L-1}) / D` where `σ_i` is the
/// parity sign of `j_k + ⋯ + j_i`.
pub fn level_measure(params: &ParamSeq, k: usize, depth: usize) -> DiscreteMeasure {
    assert!(k >= 1, "levels start at 1");
    let levels: Vec<usize> = (k..k + depth).collect();
    let mut tail = vec![BigInt::one(); depth + 1];
    for d in (0..depth).rev() {
        tail[d] = &tail[d + 1] * BigInt::from(params.b(levels[d]));
    }
    let denom = tail[0].clone();
    let counts: Vec<u64> = levels.iter().map(|&l| params.n(l)).collect();
    let total: BigInt = counts.iter().map(|&n| BigInt::from(n)).product();
    let leaves: usize = counts.iter().map(|&n| n as usize).product();

    let mut atoms = Vec::with_capacity(leaves);
    // Stack of (depth reached, parity, partial numerator).
    let mut stack: Vec<(usize, bool, BigInt)> = vec![(0, false, BigInt::zero())];
    while let Some((d, odd, acc)) = stack.pop() {
        if d == depth {
            atoms.push((acc, BigInt::one()));
            continue;
        }
        for j in 0..counts[d] {
            let odd_j = odd ^ (j % 2 == 1);
            let term = &tail[d + 1] * BigInt::from(j);
            let next = if odd_j { &acc - term } else { &acc + term };
            stack.push((d + 1, odd_j, next));
        }
    }
    DiscreteMeasure::from_raw(denom, total, atoms)
}

/// The sorted support of [`level_measure`].
pub fn level_set_approx(params: &ParamSeq, k: usize, depth: usize) -> Vec<Rational> {
    level_measure(params, k, depth).positions()
}

/// Checks `μ_k^{(L)} = (1/n_k) Σ_i μ_{k+1}^{(L-1)} ∘ φ_{k,i}^{-1}` exactly.
pub fn refinement_check(params: &ParamSeq, k: usize, depth: usize) -> Result<(), RefinementError> {
    if depth == 0 {
        return Err(RefinementError::Moran(MoranError::DepthZero));
    }
    if k == 0 {
        return Err(RefinementError::Moran(MoranError::LevelZero));
    }
    let lhs = level_measure(params, k, depth);
    let child = level_measure(params, k + 1, depth - 1);
    let n = params.n(k);
    let b = Rational::from_integer(params.b(k));
    let parts: Vec<(Rational, DiscreteMeasure)> = (0..n)
        .map(|i| {
            let sign = if i % 2 == 1 { -Rational::one() } else { Rational::one() };
            let alpha = &sign / &b;
            let beta = &alpha * &Rational::from_integer(i);
            (Rational::new(1, n), child.push_affine(&alpha, &beta))
        })
        .collect();
    let rhs = DiscreteMeasure::mixture(&parts).expect("uniform mixture is a probability measure");
    if lhs == rhs {
        Ok(())
    } else {
        Err(RefinementError::Mismatch(lhs.diff(&rhs)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RefinementError {
    #[error(transparent)]
    Moran(#[from] MoranError),
    #[error("refinement identity fails: {0}")]
    Mismatch(MeasureDiff),
}
