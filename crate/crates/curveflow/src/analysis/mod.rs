//! Theorem-audit layer: the ball ODE oracle, intersection numbers and their
//! monotonicity audits, detachment-slope estimation, the long-run
//! classifier, interior gradient bounds, and the combined fattening verdict.

pub mod audit;
pub mod ball;
pub mod classify;
pub mod detachment;
pub mod fattening;
pub mod gradient;
pub mod intersection;

pub use audit::{monotonicity_audit, AuditMode, AuditOutcome, AuditViolation};
pub use ball::{ball_radius, extinction_time, BallState};
pub use classify::{classify, Outcome, SubReports, Verdict};
pub use detachment::{estimate_detachment, DetachmentEstimate, DetachmentOpts};
pub use fattening::{fattening_verdict, FatteningOpts};
pub use gradient::{gradient_bound, gradient_bound_audit, GradientAuditReport, GradientBound};
pub use intersection::{intersection_number, CurveRef, IntersectionReport, DEFAULT_ANGLE_TOL};
