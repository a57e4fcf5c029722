use num_bigint::BigInt;
use num_traits::One;

use super::triple::{build_triples, compose_triples};
use super::SpectraError;
use crate::moran::ParamSeq;
use crate::numtheory::{DigitSet, NumError, Rational};

/// A finite spectrum truncation `Σ_j scale_j L_j`, keeping the level structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumCandidate {
    levels: Vec<(Rational, DigitSet)>,
    realized: Vec<Rational>,
}

impl SpectrumCandidate {
    /// Fails unless every digit word gives a distinct sum.
    pub fn from_levels(levels: Vec<(Rational, DigitSet)>) -> Result<Self, SpectraError> {
        if levels.is_empty() {
            return Err(SpectraError::NoLevels);
        }
        let mut acc = DigitSet::singleton(Rational::zero());
        for (scale, set) in &levels {
            acc = acc.direct_sum(&set.scaled(scale)).map_err(|e| match e {
                NumError::DirectSumCollision(x) => SpectraError::NotDirect(x),
                other => SpectraError::Malformed(other.to_string()),
            })?;
        }
        Ok(SpectrumCandidate {
            levels,
            realized: acc.elements().to_vec(),
        })
    }

    /// A flat set recorded as one level of scale 1.
    pub fn from_points(points: impl IntoIterator<Item = Rational>) -> Result<Self, SpectraError> {
        let set = DigitSet::new(points).map_err(|e| match e {
            NumError::DuplicateDigit(x) => SpectraError::NotDirect(x),
            NumError::EmptyDigitSet => SpectraError::NoLevels,
            other => SpectraError::Malformed(other.to_string()),
        })?;
        Ok(SpectrumCandidate {
            realized: set.elements().to_vec(),
            levels: vec![(Rational::one(), set)],
        })
    }

    pub fn levels(&self) -> &[(Rational, DigitSet)] {
        &self.levels
    }

    /// Sorted, duplicate-free.
    pub fn realized(&self) -> &[Rational] {
        &self.realized
    }

    pub fn len(&self) -> usize {
        self.realized.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realized.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.realized.binary_search(x).is_ok()
    }

    /// The first `depth` levels.
    pub fn truncate(&self, depth: usize) -> Result<Self, SpectraError> {
        Self::from_levels(self.levels[..depth.min(self.levels.len())].to_vec())
    }

    /// `c Λ`, level by level.
    pub fn scaled(&self, c: &Rational) -> Self {
        SpectrumCandidate {
            levels: self
                .levels
                .iter()
                .map(|(s, l)| (s * c, l.clone()))
                .collect(),
            realized: DigitSet::new(self.realized.iter().cloned())
                .expect("realized set is nonempty and distinct")
                .scaled(c)
                .elements()
                .to_vec(),
        }
    }

    /// `Λ ⊕ B Γ`.
    pub fn extend(&self, gamma: &SpectrumCandidate, b: &Rational) -> Result<Self, SpectraError> {
        let mut levels = self.levels.clone();
        levels.extend(gamma.levels.iter().map(|(s, l)| (s * b, l.clone())));
        Self::from_levels(levels)
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.realized.iter().map(Rational::to_f64).collect()
    }
}

fn candidate_from(triples: &[super::HadamardTriple]) -> Result<(SpectrumCandidate, BigInt), SpectraError> {
    let composed = compose_triples(triples)?;
    let mut scale = BigInt::one();
    let mut levels = Vec::with_capacity(triples.len());
    for t in triples {
        levels.push((Rational::from(scale.clone()), t.l().clone()));
        scale *= t.r();
    }
    let cand = SpectrumCandidate::from_levels(levels)?;
    debug_assert_eq!(cand.realized(), composed.l().elements());
    Ok((cand, scale))
}

/// `L = L_1 + b'_1 L_2 + ⋯ + (b'_1⋯b'_{K-1}) L_K` from the first `levels` triples.
pub fn build_spectrum(params: &ParamSeq, levels: usize) -> Result<SpectrumCandidate, SpectraError> {
    if levels == 0 {
        return Err(SpectraError::NoLevels);
    }
    Ok(candidate_from(&build_triples(params, levels)?)?.0)
}

/// `Γ` from the triples of factors `levels+1 ..= levels+extra`, together with
/// `B = b'_1 ⋯ b'_levels`, so that `Λ = L ⊕ B Γ`.
pub fn tail_spectrum(
    params: &ParamSeq,
    levels: usize,
    extra: usize,
) -> Result<(SpectrumCandidate, Rational), SpectraError> {
    if extra == 0 {
        return Err(SpectraError::NoLevels);
    }
    let triples = build_triples(params, levels + extra)?;
    let b: BigInt = triples[..levels].iter().map(|t| t.r().clone()).product();
    let (gamma, _) = candidate_from(&triples[levels..])?;
    Ok((gamma, Rational::from(b)))
}
