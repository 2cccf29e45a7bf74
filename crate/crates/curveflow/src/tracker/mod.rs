//! Lagrangian marker-point evolution of closed curves by V = -kappa + A,
//! with a mirror-symmetric half-plane mode (Neumann condition at the y-axis)
//! and the free whole-plane flow.

pub mod events;
pub mod evolve;
pub mod marker;

pub use events::detect_events;
pub use evolve::{evolve_free, evolve_free_halfplane, evolve_neumann, DtPolicy, TrackerOpts};
pub use marker::MarkerCurve;
