//! 1D finite-difference solvers for the graph forms of the flow: the
//! horizontal equation for r = u(x, t), the vertical equation for
//! x = v(r, t), and the free-boundary problem with prescribed contact
//! angles, plus the below-axis extension-curve construction.

pub mod extension;
pub mod free_boundary;
pub mod horizontal;
pub mod vertical;

pub use extension::{extension_curve, extension_curve_of_closed, ExtensionCurve, Ray};
pub use free_boundary::{arc_cap_profile, solve_free_boundary, FreeBoundaryOpts};
pub use horizontal::{horizontal_rate, step_horizontal, GraphState};
pub use vertical::{step_vertical, vertical_rate, VerticalSign};
