use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::numtheory::{DigitSet, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("a measure needs at least one atom")]
    Empty,
    #[error("atom at {0} has non-positive weight")]
    NonPositiveWeight(Rational),
    #[error("weights sum to {0}, not 1")]
    MassNotOne(Rational),
}

/// A finitely supported probability measure with rational atoms.
///
/// Atoms are kept over common denominators: position `x_j = pos_j / denom`
/// and weight `w_j = wt_j / weight_denom`, sorted by position with no
/// repeats, both fractions in lowest common terms. Equality is therefore
/// equality of measures.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiscreteMeasure {
    denom: BigInt,
    weight_denom: BigInt,
    atoms: Vec<(BigInt, BigInt)>,
}

impl DiscreteMeasure {
    /// Builds from raw integer data; repeated positions are merged.
    /// Callers guarantee positive weights summing to `weight_denom`.
    pub(crate) fn from_raw(
        denom: BigInt,
        weight_denom: BigInt,
        mut atoms: Vec<(BigInt, BigInt)>,
    ) -> Self {
        debug_assert!(denom.is_positive() && weight_denom.is_positive());
        if atoms.len() > 4096 {
            atoms.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
        } else {
            atoms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        }
        let mut merged: Vec<(BigInt, BigInt)> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += w,
                _ => merged.push((x, w)),
            }
        }
        let mut m = DiscreteMeasure {
            denom,
            weight_denom,
            atoms: merged,
        };
        m.canonicalize();
        debug_assert_eq!(
            m.atoms.iter().map(|a| &a.1).sum::<BigInt>(),
            m.weight_denom,
            "mass must be one"
        );
        m
    }

    fn canonicalize(&mut self) {
        let g = self
            .atoms
            .iter()
            .fold(self.denom.clone(), |acc, (x, _)| acc.gcd(x));
        if !g.is_one() {
            self.denom /= &g;
            for (x, _) in &mut self.atoms {
                *x /= &g;
            }
        }
        let g = self
            .atoms
            .iter()
            .fold(self.weight_denom.clone(), |acc, (_, w)| acc.gcd(w));
        if !g.is_one() {
            self.weight_denom /= &g;
            for (_, w) in &mut self.atoms {
                *w /= &g;
            }
        }
    }

    pub fn dirac(x: &Rational) -> Self {
        DiscreteMeasure {
            denom: x.denom().clone(),
            weight_denom: BigInt::one(),
            atoms: vec![(x.numer().clone(), BigInt::one())],
        }
    }

    /// Validated construction from `(position, weight)` pairs.
    pub fn from_atoms(
        atoms: impl IntoIterator<Item = (Rational, Rational)>,
    ) -> Result<Self, MeasureError> {
        let atoms: Vec<(Rational, Rational)> = atoms.into_iter().collect();
        if atoms.is_empty() {
            return Err(MeasureError::Empty);
        }
        if let Some((x, _)) = atoms.iter().find(|(_, w)| !w.is_positive()) {
            return Err(MeasureError::NonPositiveWeight(x.clone()));
        }
        let total: Rational = atoms.iter().map(|(_, w)| w).sum();
        if total != Rational::one() {
            return Err(MeasureError::MassNotOne(total));
        }
        let denom = atoms.iter().fold(BigInt::one(), |a, (x, _)| a.lcm(x.denom()));
        let wden = atoms.iter().fold(BigInt::one(), |a, (_, w)| a.lcm(w.denom()));
        let raw = atoms
            .iter()
            .map(|(x, w)| {
                (
                    x.numer() * (&denom / x.denom()),
                    w.numer() * (&wden / w.denom()),
                )
            })
            .collect();
        Ok(Self::from_raw(denom, wden, raw))
    }

    /// Uniform measure `δ_A` on a digit set.
    pub fn uniform(set: &DigitSet) -> Self {
        let denom = set.common_denominator();
        let raw = set
            .iter()
            .map(|a| (a.numer() * (&denom / a.denom()), BigInt::one()))
            .collect();
        Self::from_raw(denom, BigInt::from(set.len()), raw)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Common denominator of all positions.
    pub fn position_denominator(&self) -> &BigInt {
        &self.denom
    }

    pub fn weight_denominator(&self) -> &BigInt {
        &self.weight_denom
    }

    /// Raw `(position numerator, weight numerator)` pairs over the common denominators.
    pub fn raw_atoms(&self) -> &[(BigInt, BigInt)] {
        &self.atoms
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Rational, Rational)> + '_ {
        self.atoms.iter().map(|(x, w)| {
            (
                Rational::new(x.clone(), self.denom.clone()),
                Rational::new(w.clone(), self.weight_denom.clone()),
            )
        })
    }

    pub fn positions(&self) -> Vec<Rational> {
        self.atoms
            .iter()
            .map(|(x, _)| Rational::new(x.clone(), self.denom.clone()))
            .collect()
    }

    pub fn total_mass(&self) -> Rational {
        let s: BigInt = self.atoms.iter().map(|a| &a.1).sum();
        Rational::new(s, self.weight_denom.clone())
    }

    pub fn min_position(&self) -> Rational {
        Rational::new(self.atoms[0].0.clone(), self.denom.clone())
    }

    pub fn max_position(&self) -> Rational {
        let last = self.atoms.last().expect("nonempty");
        Rational::new(last.0.clone(), self.denom.clone())
    }

    /// Atoms as floats, for transcendental evaluation.
    pub fn float_atoms(&self) -> Vec<(f64, f64)> {
        let ratio = |n: &BigInt, d: &BigInt, df: Option<f64>| match (n.to_f64(), df) {
            (Some(nf), Some(df)) if nf.is_finite() && df.is_finite() => nf / df,
            _ => Rational::new(n.clone(), d.clone()).to_f64(),
        };
        let df = self.denom.to_f64();
        let wf = self.weight_denom.to_f64();
        self.atoms
            .par_iter()
            .map(|(x, w)| {
                (
                    ratio(x, &self.denom, df),
                    ratio(w, &self.weight_denom, wf),
                )
            })
            .collect()
    }

    /// Pushforward under `x ↦ alpha·x + beta`.
    pub fn push_affine(&self, alpha: &Rational, beta: &Rational) -> Self {
        if alpha.is_zero() {
            return Self::dirac(beta);
        }
        // alpha·x/D + beta = (an·x·bd + bn·ad·D) / (ad·bd·D)
        let denom = alpha.denom() * beta.denom() * &self.denom;
        let shift = beta.numer() * alpha.denom() * &self.denom;
        let scale = alpha.numer() * beta.denom();
        let raw = self
            .atoms
            .iter()
            .map(|(x, w)| (&scale * x + &shift, w.clone()))
            .collect();
        Self::from_raw(denom, self.weight_denom.clone(), raw)
    }

    /// `μ * ν`.
    pub fn convolve(&self, other: &DiscreteMeasure) -> Self {
        let denom = self.denom.lcm(&other.denom);
        let fa = &denom / &self.denom;
        let fb = &denom / &other.denom;
        let a: Vec<(BigInt, &BigInt)> = self.atoms.iter().map(|(x, w)| (x * &fa, w)).collect();
        let b: Vec<(BigInt, &BigInt)> = other.atoms.iter().map(|(x, w)| (x * &fb, w)).collect();
        let raw: Vec<(BigInt, BigInt)> = a
            .par_iter()
            .flat_map_iter(|(xa, wa)| b.iter().map(move |(xb, wb)| (xa + xb, *wa * *wb)))
            .collect();
        Self::from_raw(denom, &self.weight_denom * &other.weight_denom, raw)
    }

    /// `Σ c_i μ_i` for positive rational coefficients summing to one.
    pub fn mixture(parts: &[(Rational, DiscreteMeasure)]) -> Result<Self, MeasureError> {
        if parts.is_empty() {
            return Err(MeasureError::Empty);
        }
        if let Some((_, m)) = parts.iter().find(|(c, _)| !c.is_positive()) {
            return Err(MeasureError::NonPositiveWeight(m.min_position()));
        }
        let total: Rational = parts.iter().map(|(c, _)| c).sum();
        if total != Rational::one() {
            return Err(MeasureError::MassNotOne(total));
        }
        let denom = parts.iter().fold(BigInt::one(), |a, (_, m)| a.lcm(&m.denom));
        // weight of atom in part i: c_i · w / W_i = (cn·w·(L/(cd·W_i))) / L
        let wden = parts
            .iter()
            .fold(BigInt::one(), |a, (c, m)| a.lcm(&(c.denom() * &m.weight_denom)));
        let mut raw = Vec::new();
        for (c, m) in parts {
            let fx = &denom / &m.denom;
            let fw = c.numer() * (&wden / (c.denom() * &m.weight_denom));
            raw.extend(m.atoms.iter().map(|(x, w)| (x * &fx, w * &fw)));
        }
        Ok(Self::from_raw(denom, wden, raw))
    }

    /// `∫ e^{2πitx} dμ(x)`.
    pub fn characteristic(&self, t: f64) -> Complex64 {
        self.float_atoms()
            .iter()
            .map(|&(x, w)| Complex64::from_polar(w, 2.0 * PI * t * x))
            .sum()
    }

    /// Positions and weights present in one measure but not matched in the other.
    pub fn diff(&self, other: &DiscreteMeasure) -> MeasureDiff {
        let a: Vec<(Rational, Rational)> = self.atoms().collect();
        let b: Vec<(Rational, Rational)> = other.atoms().collect();
        let (mut i, mut j) = (0, 0);
        let mut d = MeasureDiff::default();
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    if x.1 != y.1 {
                        d.weight_mismatch.push((x.0.clone(), x.1.clone(), y.1.clone()));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    d.left_only.push(x.clone());
                    i += 1;
                }
                (Some(_), Some(y)) => {
                    d.right_only.push(y.clone());
                    j += 1;
                }
                (Some(x), None) => {
                    d.left_only.push(x.clone());
                    i += 1;
                }
                (None, Some(y)) => {
                    d.right_only.push(y.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        d
    }

    /// Largest `|x|` over the support, as a float.
    pub fn support_radius(&self) -> f64 {
        let m = self
            .atoms
            .iter()
            .map(|(x, _)| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let r = Rational::new(m, self.denom.clone());
        r.to_f64()
    }

    /// Whether every position fits in `i64` after scaling by `denom`, plus the positions.
    pub fn integer_positions_over_denom(&self) -> Option<(i128, Vec<i128>)> {
        let d = self.denom.to_i128()?;
        let xs: Option<Vec<i128>> = self.atoms.iter().map(|(x, _)| x.to_i128()).collect();
        Some((d, xs?))
    }
}

impl fmt::Debug for DiscreteMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DiscreteMeasure[")?;
        for (i, (x, w)) in self.atoms().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if i == 16 {
                write!(f, "... {} atoms", self.len())?;
                break;
            }
            write!(f, "({x}, {w})")?;
        }
        f.write_str("]")
    }
}

/// Atom-level difference between two measures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MeasureDiff {
    pub left_only: Vec<(Rational, Rational)>,
    pub right_only: Vec<(Rational, Rational)>,
    /// `(position, left weight, right weight)`.
    pub weight_mismatch: Vec<(Rational, Rational, Rational)>,
}

impl MeasureDiff {
    pub fn is_empty(&self) -> bool {
        self.left_only.is_empty() && self.right_only.is_empty() && self.weight_mismatch.is_empty()
    }
}

impl fmt::Display for MeasureDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} atoms only on the left, {} only on the right, {} weight mismatches",
            self.left_only.len(),
            self.right_only.len(),
            self.weight_mismatch.len()
        )?;
        if let Some((x, w)) = self.left_only.first() {
            write!(f, "; first left-only ({x}, {w})")?;
        }
        if let Some((x, w)) = self.right_only.first() {
            write!(f, "; first right-only ({x}, {w})")?;
        }
        if let Some((x, a, b)) = self.weight_mismatch.first() {
            write!(f, "; at {x}: {a} vs {b}")?;
        }
        Ok(())
    }
}
