use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("time step {dt} exceeds stability bound {bound}")]
    CflViolation { dt: f64, bound: f64 },

    #[error("solution became singular at x = {x} (t = {t}): {reason}")]
    Singularity { x: f64, t: f64, reason: String },

    #[error("curve self-intersection detected at t = {t}")]
    SelfIntersection { t: f64 },

    #[error("contact angle drifted by {drift} rad at t = {t} (tolerance {tol})")]
    AngleDrift { t: f64, drift: f64, tol: f64 },

    #[error("reinitialization moved the zero contour by {moved} ({bound} allowed)")]
    ReinitDrift { moved: f64, bound: f64 },

    #[error("{0} requested beyond extinction time {1}")]
    BeyondExtinction(f64, f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("traces are not time-aligned: {0}")]
    TraceMismatch(String),

    #[error("configuration invalid:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error in {path}: {msg}")]
    Parse { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
