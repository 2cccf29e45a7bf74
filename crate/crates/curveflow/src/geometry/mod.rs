//! Geometric primitives shared by all solvers: points, polylines, graph
//! profiles, curvature, distances, and the built-in initial-curve families.

pub mod io;
pub mod point;
pub mod polyline;
pub mod profile;

pub use point::Point2;
pub use polyline::{hausdorff_distance, hausdorff_distance_sets, Orientation, PolyCurve};
pub use profile::{
    check_alpha_domain, make_initial_curve, AlphaReport, Contact, CurveFamily, Profile,
};
