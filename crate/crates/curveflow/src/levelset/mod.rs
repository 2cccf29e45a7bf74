//! Finite-difference solver for the level-set equation
//! phi_t = |grad phi| div(grad phi/|grad phi|) + A |grad phi|,
//! with marching-squares contour extraction, distance reinitialization, and
//! the inner/outer fattening bracket.

pub mod contour;
pub mod evolve;
pub mod fattening;
pub mod field;
pub mod grid;
pub mod reinit;
pub mod stepper;

pub use contour::{enclosed_area, extract_zero_contour};
pub use evolve::{evolve, LevelSetOpts, LsDtPolicy};
pub use fattening::{fattening_bracket, BracketVerdict, FatteningBracket};
pub use field::{signed_distance_init, signed_distance_raw, ScalarField2D, CLAMP_SCALE};
pub use grid::GridSpec;
pub use reinit::reinitialize;
pub use stepper::{cfl_bound, step, StepStats};
