//! Hadamard triples, spectrum assembly, the Q-function and exact bi-zero checks.

mod bizero;
mod qfunc;
mod spectrum;
mod triple;

pub use bizero::{bizero_check, BiZeroReport};
pub use qfunc::{q_function, q_grid, QValue, Transform};
pub use spectrum::{build_spectrum, tail_spectrum, SpectrumCandidate};
pub use triple::{build_triples, compose_triples, HadamardTriple};

use crate::spectrality::Divisibility;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectraError {
    #[error("malformed triple: {0}")]
    Malformed(String),
    #[error("triple {0} is not a Hadamard triple")]
    NotHadamard(usize),
    #[error("factor {0} has no integer spectrum of the standard form")]
    NoIntegerSpectrum(usize),
    #[error("divisibility guards fail: {}", join(.0))]
    Guards(Vec<Divisibility>),
    #[error("spectrum levels are not a direct sum: {0} has two representations")]
    NotDirect(crate::numtheory::Rational),
    #[error("a spectrum needs at least one level")]
    NoLevels,
}

fn join(items: &[Divisibility]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}
