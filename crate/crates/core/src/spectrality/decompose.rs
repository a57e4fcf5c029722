use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use super::SpectralityError;
use crate::numtheory::Rational;
use crate::spectra::SpectrumCandidate;

/// The classes `Λ_n = ℤ ∩ (Λ/d_1 - n/c)` and the assembled `Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub c: u64,
    pub q: u64,
    /// Inhabited classes only.
    pub classes: BTreeMap<u64, Vec<BigInt>>,
    /// `n = i + q j_i` for each `i`.
    pub selected: Vec<u64>,
    /// `∪_i ((i + q j_i)/c + Λ_{i + q j_i})`, or `None` if every selected class is empty.
    pub gamma: Option<SpectrumCandidate>,
}

impl Decomposition {
    /// `∪_n (n/c + Λ_n)`, which equals `Λ / d_1`.
    pub fn reassemble(&self) -> Vec<Rational> {
        let c = BigInt::from(self.c);
        let mut all: Vec<Rational> = self
            .classes
            .iter()
            .flat_map(|(&n, zs)| {
                let c = c.clone();
                zs.iter().map(move |z| Rational::new(BigInt::from(n) + z * &c, c.clone()))
            })
            .collect();
        all.sort();
        all
    }

    /// The children `Λ_n` as candidates.
    pub fn children(&self) -> Vec<(u64, SpectrumCandidate)> {
        self.classes
            .iter()
            .map(|(&n, zs)| {
                let pts = zs.iter().cloned().map(Rational::from);
                (n, SpectrumCandidate::from_points(pts).expect("classes are nonempty and distinct"))
            })
            .collect()
    }
}

/// Splits `Λ / d_1` into residue classes modulo `1/c` and assembles
/// `Γ` from the chosen classes `n = i + q j_i`, `q = c / γ_1`.
pub fn decompose_spectrum(
    lambda: &SpectrumCandidate,
    d1: &Rational,
    gamma1: u64,
    c: u64,
    choices: &[u64],
) -> Result<Decomposition, SpectralityError> {
    if d1.is_zero() {
        return Err(SpectralityError::ZeroScale);
    }
    if gamma1 < 2 {
        return Err(SpectralityError::GammaTooSmall { index: 1 });
    }
    if c == 0 || c % gamma1 != 0 {
        return Err(SpectralityError::ModulusNotMultiple { c, gamma: gamma1 });
    }
    let q = c / gamma1;
    if choices.len() as u64 != q {
        return Err(SpectralityError::ChoiceCount { expected: q, got: choices.len() });
    }
    if let Some((i, &j)) = choices.iter().enumerate().find(|(_, &j)| j >= gamma1) {
        return Err(SpectralityError::ChoiceOutOfRange { i, j, gamma: gamma1 });
    }
    if !lambda.contains(&Rational::zero()) {
        return Err(SpectralityError::ZeroNotInSpectrum);
    }
    let cb = BigInt::from(c);
    let scaled: Vec<(u64, BigInt)> = lambda
        .realized()
        .par_iter()
        .map(|x| {
            let y = x / d1 * Rational::from(cb.clone());
            let m = y.to_integer().ok_or_else(|| SpectralityError::NotInLattice(x.clone()))?;
            let (z, n) = m.div_mod_floor(&cb);
            Ok((u64::try_from(n).expect("residue below c"), z))
        })
        .collect::<Result<_, _>>()?;
    let mut classes: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
    for (n, z) in scaled {
        classes.entry(n).or_default().push(z);
    }
    for zs in classes.values_mut() {
        zs.sort();
    }
    let selected: Vec<u64> = choices.iter().enumerate().map(|(i, &j)| i as u64 + q * j).collect();
    let gamma_pts: Vec<Rational> = selected
        .iter()
        .filter_map(|n| classes.get(n).map(|zs| (n, zs)))
        .flat_map(|(&n, zs)| zs.iter().map(move |z| Rational::new(n, c) + Rational::from(z.clone())))
        .collect();
    let gamma = if gamma_pts.is_empty() {
        None
    } else {
        Some(SpectrumCandidate::from_points(gamma_pts).expect("classes are disjoint"))
    };
    Ok(Decomposition {
        c,
        q,
        classes,
        selected,
        gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::{omega_factors, rearranged_prefix};
    use crate::moran::ParamSeq;
    use crate::numtheory::q;
    use crate::spectra::{bizero_check, build_spectrum};

    #[test]
    fn zero_spectrum() {
        let z = SpectrumCandidate::from_points([q(0, 1)]).unwrap();
        let d = decompose_spectrum(&z, &q(8, 1), 2, 6, &[0, 0, 0]).unwrap();
        assert_eq!(d.gamma.unwrap().realized(), &[q(0, 1)]);
        let d = decompose_spectrum(&z, &q(8, 1), 2, 6, &[1, 0, 1]).unwrap();
        assert!(d.gamma.is_none());
    }

    #[test]
    fn classes_by_choice_when_q_is_one() {
        let s = ParamSeq::constant(8, 2).unwrap();
        let lam = build_spectrum(&s, 3).unwrap();
        let d = decompose_spectrum(&lam, &q(8, 1), 2, 2, &[1]).unwrap();
        assert_eq!(d.q, 1);
        assert_eq!(d.selected, vec![1]);
        assert_eq!(d.classes.keys().copied().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn round_trip_and_tail() {
        let s = ParamSeq::constant(8, 2).unwrap();
        let lam = build_spectrum(&s, 3).unwrap();
        let d1 = q(8, 1);
        for c in [2u64, 4, 46] {
            let q1 = (c / 2) as usize;
            for j0 in 0..2u64 {
                let mut choices = vec![0; q1];
                choices[0] = j0;
                let d = decompose_spectrum(&lam, &d1, 2, c, &choices).unwrap();
                let want: Vec<Rational> = lam.realized().iter().map(|x| x / &d1).collect();
                assert_eq!(d.reassemble(), want);
                let gamma = d.gamma.unwrap();
                let seq = rearranged_prefix(&s, 3);
                let tail = omega_factors(&seq, 1, 2);
                assert!(bizero_check(&gamma, &tail, 2).holds());
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let lam = SpectrumCandidate::from_points([q(0, 1), q(1, 3)]).unwrap();
        assert!(matches!(
            decompose_spectrum(&lam, &q(1, 1), 2, 4, &[0, 0]),
            Err(SpectralityError::NotInLattice(_))
        ));
        assert!(matches!(
            decompose_spectrum(&lam, &q(1, 1), 2, 3, &[0]),
            Err(SpectralityError::ModulusNotMultiple { .. })
        ));
        assert!(matches!(
            decompose_spectrum(&lam, &q(1, 1), 2, 6, &[0, 2, 0]),
            Err(SpectralityError::ChoiceOutOfRange { i: 1, .. })
        ));
        let no_zero = SpectrumCandidate::from_points([q(1, 1)]).unwrap();
        assert_eq!(
            decompose_spectrum(&no_zero, &q(1, 1), 2, 2, &[0]),
            Err(SpectralityError::ZeroNotInSpectrum)
        );
    }
}
