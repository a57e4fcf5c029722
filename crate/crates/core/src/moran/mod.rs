//! The staggered-ratio Moran system: parameter sequences, the maps
//! `φ_{k,i}`, and exact finite-depth approximations of the level sets
//! `E_k` and measures `μ_k`.

mod ifs;
mod measure;
mod params;

pub use ifs::{
    apply_map, compose_path, depth_position_error, level_measure, level_set_approx,
    refinement_check, MoranError, RefinementError,
};
pub use measure::{DiscreteMeasure, MeasureDiff, MeasureError};
pub use params::{ParamError, ParamSeq};
