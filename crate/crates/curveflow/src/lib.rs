//! 2D geometric evolution of closed curves by normal velocity V = -kappa + A,
//! where A >= 0 is a constant driving force.
//!
//! The crate provides two independent solvers for the same flow plus an
//! analysis layer that cross-checks them:
//!
//! - [`levelset`]: finite-difference solver for the level-set equation
//!   `phi_t = |grad phi| div(grad phi / |grad phi|) + A |grad phi|`, with
//!   contour extraction, reinitialization, and an inner/outer bracket that
//!   detects fattening of the interface evolution.
//! - [`tracker`]: Lagrangian marker-point evolution of closed polylines,
//!   including a half-plane mode with mirror symmetry across the y-axis
//!   (a Neumann condition at the axis) and the free whole-plane flow.
//! - [`graph`]: 1D finite-difference solvers for the horizontal and vertical
//!   graph forms of the flow and the free-boundary problem with prescribed
//!   contact angles.
//! - [`analysis`]: ball ODE oracle, intersection-number counting and
//!   monotonicity audits, the expanding/bounded/shrinking classifier,
//!   detachment-slope estimation, interior gradient bounds, and the combined
//!   fattening verdict.
//! - [`experiment`]: config-driven runner writing traces, frames, events, and
//!   verdicts; the `curveflow` binary exposes it as `run`, `validate`,
//!   `compare`, and `suite` subcommands.
//!
//! Start with the `examples/` directory: each file is a runnable
//! demonstration of one capability, e.g.
//!
//! ```bash
//! cargo run --release --example ball_ode
//! cargo run --release --example fattening_dichotomy
//! ```

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod graph;
pub mod levelset;
pub mod trace;
pub mod tracker;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::geometry::{
        check_alpha_domain, hausdorff_distance, make_initial_curve, Contact, CurveFamily,
        Orientation, Point2, PolyCurve, Profile,
    };
    pub use crate::trace::{ContactKind, EventKind, EvolutionTrace};
}
