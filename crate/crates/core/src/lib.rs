//! Spectral analysis of Moran measures with alternating-sign digit maps.
//!
//! The measures are generated by the level-dependent maps
//! `φ_{k,i}(x) = (-1)^i (x + i) / b_k`, `0 <= i < 2 p_k`. The crate builds
//! finite-level approximations of these measures, evaluates their Fourier
//! transforms with certified truncation error, decides spectrality through
//! arithmetic criteria, and constructs and verifies explicit spectra.
//!
//! All digits, atoms and frequencies are exact rationals; floating point is
//! only used when evaluating transcendental functions.

pub mod convolution;
pub mod fourier;
pub mod moran;
pub mod numtheory;
pub mod spectra;
pub mod spectrality;

pub mod cli;

pub use moran::{DiscreteMeasure, ParamSeq};
pub use numtheory::{DigitSet, Rational};
