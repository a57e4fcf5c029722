use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed};

use super::SpectraError;
use crate::convolution::{rearranged_prefix, ConvolutionFactor, FactorOrigin, RearrangedSeq};
use crate::moran::ParamSeq;
use crate::numtheory::{mask_zero_exact, DigitSet, Rational};
use crate::spectrality::{triple_guards, Divisibility};

/// Integer data `(R, B, L)` with `#B = #L >= 2` and `|R| > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HadamardTriple {
    r: BigInt,
    b: DigitSet,
    l: DigitSet,
}

impl HadamardTriple {
    pub fn new(r: impl Into<BigInt>, b: DigitSet, l: DigitSet) -> Result<Self, SpectraError> {
        let r = r.into();
        if r.abs() <= BigInt::one() {
            return Err(SpectraError::Malformed(format!("|R| = {} must exceed 1", r.abs())));
        }
        if b.len() != l.len() || b.len() < 2 {
            return Err(SpectraError::Malformed(format!(
                "#B = {} and #L = {} must agree and be at least 2",
                b.len(),
                l.len()
            )));
        }
        if !b.is_integral() || !l.is_integral() {
            return Err(SpectraError::Malformed("B and L must be integer sets".into()));
        }
        Ok(HadamardTriple { r, b, l })
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn b(&self) -> &DigitSet {
        &self.b
    }

    pub fn l(&self) -> &DigitSet {
        &self.l
    }

    /// Exact unitarity of `(1/√#B) (e^{-2πi bℓ/R})`: distinct columns
    /// `ℓ, ℓ'` are orthogonal iff `m_B((ℓ - ℓ')/R) = 0`.
    pub fn is_hadamard(&self) -> bool {
        let r = Rational::from(self.r.clone());
        let ls = self.l.elements();
        let diffs: BTreeSet<Rational> = ls
            .iter()
            .enumerate()
            .flat_map(|(i, a)| ls[i + 1..].iter().map(move |c| c - a))
            .collect();
        diffs.iter().all(|d| mask_zero_exact(&self.b, &(d / &r)))
    }

    /// `max |(H H*)_{jk} - δ_{jk}|` computed in floating point.
    pub fn unitarity_defect(&self) -> f64 {
        let r = Rational::from(self.r.clone()).to_f64();
        let n = self.b.len();
        let bs: Vec<f64> = self.b.iter().map(Rational::to_f64).collect();
        let ls: Vec<f64> = self.l.iter().map(Rational::to_f64).collect();
        let h: Vec<Vec<Complex64>> = bs
            .iter()
            .map(|&b| {
                ls.iter()
                    .map(|&l| Complex64::from_polar(1.0 / (n as f64).sqrt(), -2.0 * PI * b * l / r))
                    .collect()
            })
            .collect();
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for c in 0..n {
                    s += h[c][j].conj() * h[c][k];
                }
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

/// `(N, B, L)` with `N = Π N_j`, `B = Σ_j (N_{j+1}⋯N_n) B_j`, `L = Σ_j (N_1⋯N_{j-1}) L_j`.
pub fn compose_triples(ts: &[HadamardTriple]) -> Result<HadamardTriple, SpectraError> {
    if ts.is_empty() {
        return Err(SpectraError::Malformed("nothing to compose".into()));
    }
    if let Some(i) = ts.iter().position(|t| !t.is_hadamard()) {
        return Err(SpectraError::NotHadamard(i));
    }
    let n: BigInt = ts.iter().map(|t| t.r.clone()).product();
    let mut b = DigitSet::singleton(Rational::zero());
    for t in ts {
        b = b.scaled(&Rational::from(t.r.clone())).sumset(&t.b);
    }
    let mut l = DigitSet::singleton(Rational::zero());
    let mut scale = BigInt::one();
    for t in ts {
        l = l.sumset(&t.l.scaled(&Rational::from(scale.clone())));
        scale *= &t.r;
    }
    let composed = HadamardTriple::new(n, b, l)?;
    debug_assert!(composed.is_hadamard());
    Ok(composed)
}

/// Spectrum digits for one rearranged factor: `(b'/p) D_p` for consecutive
/// parts and `(b'/2) D_2` for pair parts.
fn factor_spectrum(f: &ConvolutionFactor) -> Option<DigitSet> {
    let step = f.step.to_integer()?;
    let count = BigInt::from(f.digits.len());
    let needed = match f.origin {
        FactorOrigin::Consecutive(_) => count,
        FactorOrigin::Pair(_) => BigInt::from(2),
        _ => return None,
    };
    if (&step % &needed) != BigInt::from(0) {
        return None;
    }
    Some(DigitSet::consecutive(f.digits.len() as u64).scaled(&Rational::from(step / needed)))
}

/// Triples `(b'_j, D'_j, L_j)` for the first `count` rearranged factors.
pub fn build_triples(params: &ParamSeq, count: usize) -> Result<Vec<HadamardTriple>, SpectraError> {
    let seq = rearranged_prefix(params, count);
    triples_for(params, &seq)
}

pub(crate) fn triples_for(params: &ParamSeq, seq: &RearrangedSeq) -> Result<Vec<HadamardTriple>, SpectraError> {
    let touched = seq
        .factors
        .iter()
        .map(|f| match f.origin {
            FactorOrigin::Pair(k) => k + 1,
            o => o.level(),
        })
        .max()
        .unwrap_or(1);
    let failures: Vec<Divisibility> = triple_guards(params, touched);
    if !failures.is_empty() {
        return Err(SpectraError::Guards(failures));
    }
    seq.factors
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let l = factor_spectrum(f).ok_or(SpectraError::NoIntegerSpectrum(j + 1))?;
            let b = f.digits.clone();
            let t = HadamardTriple::new(f.step.to_integer().expect("checked"), b, l)?;
            if t.is_hadamard() {
                Ok(t)
            } else {
                Err(SpectraError::NotHadamard(j))
            }
        })
        .collect()
}
