use std::collections::BTreeMap;

use rayon::prelude::*;

use super::SpectrumCandidate;
use crate::convolution::ConvolutionFactor;
use crate::numtheory::Rational;

/// Outcome of an exact bi-zero test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiZeroReport {
    /// Number of distinct positive differences tested.
    pub differences: usize,
    /// First pair `(λ, λ')` whose difference is not a zero.
    pub witness: Option<(Rational, Rational)>,
}

impl BiZeroReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Whether `(Λ - Λ) \ {0}` lies in the zero set of the convolution of the
/// first `levels` factors.
pub fn bizero_check(lambda: &SpectrumCandidate, factors: &[ConvolutionFactor], levels: usize) -> BiZeroReport {
    assert!(levels <= factors.len(), "asked for {levels} of {} factors", factors.len());
    let fs = &factors[..levels];
    let pts = lambda.realized();
    let mut diffs: BTreeMap<Rational, (usize, usize)> = BTreeMap::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            diffs.entry(&pts[j] - &pts[i]).or_insert((i, j));
        }
    }
    let list: Vec<(&Rational, &(usize, usize))> = diffs.iter().collect();
    let failing = list
        .par_iter()
        .filter(|(d, _)| !fs.iter().any(|f| f.vanishes_at(d)))
        .map(|(_, &(i, j))| (i, j))
        .min();
    BiZeroReport {
        differences: diffs.len(),
        witness: failing.map(|(i, j)| (pts[i].clone(), pts[j].clone())),
    }
}
