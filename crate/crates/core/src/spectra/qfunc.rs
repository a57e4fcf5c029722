use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::SpectrumCandidate;
use crate::convolution::ConvolutionFactor;
use crate::fourier::{mu_hat, nu_hat};
use crate::moran::{DiscreteMeasure, ParamSeq};

/// How `μ̂` is evaluated inside the Q-function.
#[derive(Debug, Clone)]
pub enum Transform {
    MuHat { params: ParamSeq, truncation: usize },
    NuHat { params: ParamSeq, truncation: usize },
    /// Atoms `(x, w)` of a finite measure.
    Empirical(Vec<(f64, f64)>),
    /// Product of factor masks.
    Factors(Vec<ConvolutionFactor>),
}

impl Transform {
    pub fn empirical(m: &DiscreteMeasure) -> Self {
        Transform::Empirical(m.float_atoms())
    }

    pub fn factors(fs: &[ConvolutionFactor]) -> Self {
        Transform::Factors(fs.to_vec())
    }

    /// Value and certified error bound (zero for finite measures).
    pub fn eval(&self, t: f64) -> (Complex64, f64) {
        match self {
            Transform::MuHat { params, truncation } => {
                let v = mu_hat(params, t, *truncation);
                (v.value, v.error_bound)
            }
            Transform::NuHat { params, truncation } => {
                let v = nu_hat(params, t, *truncation);
                (v.value, v.error_bound)
            }
            Transform::Empirical(atoms) => (
                atoms.iter().map(|&(x, w)| Complex64::from_polar(w, 2.0 * PI * t * x)).sum(),
                0.0,
            ),
            Transform::Factors(fs) => (fs.iter().map(|f| f.transform(t)).product(), 0.0),
        }
    }
}

/// `Q(t)` with an enclosing interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QValue {
    pub t: f64,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// `Q_{Λ,μ}(t) = Σ_{λ∈Λ} |μ̂(t + λ)|²`.
pub fn q_function(lambda: &SpectrumCandidate, transform: &Transform, t: f64) -> QValue {
    lambda
        .as_f64()
        .iter()
        .map(|&l| {
            let (v, e) = transform.eval(t + l);
            let a = v.norm();
            (a * a, (a - e).max(0.0).powi(2), (a + e).min(1.0).max(a).powi(2))
        })
        .fold(QValue { t, value: 0.0, lower: 0.0, upper: 0.0 }, |q, (v, lo, hi)| QValue {
            t,
            value: q.value + v,
            lower: q.lower + lo,
            upper: q.upper + hi,
        })
}

/// [`q_function`] at each point of `ts`.
pub fn q_grid(lambda: &SpectrumCandidate, transform: &Transform, ts: &[f64]) -> Vec<QValue> {
    ts.par_iter().map(|&t| q_function(lambda, transform, t)).collect()
}
