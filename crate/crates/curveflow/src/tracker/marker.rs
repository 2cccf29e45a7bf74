use crate::error::{Error, Result};
use crate::geometry::point::Point2;
use crate::geometry::polyline::{resample_by_arclength_curved, PolyCurve};

/// Closed marker-point curve with a target node spacing.
#[derive(Debug, Clone)]
pub struct MarkerCurve {
    pub curve: PolyCurve,
    pub target_spacing: f64,
}

/// Minimum node count kept through redistribution.
pub const MIN_NODES: usize = 8;

impl MarkerCurve {
    /// Wraps a closed curve, redistributing nodes to the target spacing.
    pub fn from_curve(curve: PolyCurve, target_spacing: f64) -> Result<Self> {
        if target_spacing <= 0.0 {
            return Err(Error::InvalidInput("target spacing must be positive".into()));
        }
        if !curve.closed {
            return Err(Error::Geometry("marker curve must be closed".into()));
        }
        let mc = Self {
            curve,
            target_spacing,
        };
        mc.redistributed()
    }

    /// Stability bound for the explicit step.
    pub fn cfl_dt(&self) -> f64 {
        0.4 * self.target_spacing * self.target_spacing / 2.0
    }

    /// Moves every node by dt (-kappa + A) along its outward normal, then
    /// redistributes nodes by cumulative-arclength resampling.
    ///
    /// Self-intersection is the caller's per-frame check; this function only
    /// enforces the step-size bound.
    pub fn step(&self, a: f64, dt: f64) -> Result<Self> {
        let bound = self.cfl_dt();
        if dt > bound * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt, bound });
        }
        let kappa = self.curve.curvature()?;
        let normals = self.curve.outward_normals();
        let moved: Vec<Point2> = self
            .curve
            .points
            .iter()
            .zip(kappa.iter().zip(normals.iter()))
            .map(|(&p, (&k, &n))| p + n * (dt * (a - k)))
            .collect();
        let mut curve = PolyCurve {
            points: moved,
            closed: true,
            orientation: self.curve.orientation,
        };
        // Guard against a step collapsing neighbors onto each other.
        curve.points.dedup_by(|p, q| p == q);
        if curve.points.len() < 3 {
            return Err(Error::Geometry("curve collapsed".into()));
        }
        Self {
            curve,
            target_spacing: self.target_spacing,
        }
        .redistributed()
    }

    fn redistributed(mut self) -> Result<Self> {
        let len = self.curve.arc_length();
        let count = ((len / self.target_spacing).round() as usize).max(MIN_NODES);
        let pts = resample_by_arclength_curved(&self.curve.points, true, count);
        let mut curve = PolyCurve {
            points: pts,
            closed: true,
            orientation: self.curve.orientation,
        };
        curve.points.dedup_by(|p, q| p == q);
        if curve.points.len() < 3 {
            return Err(Error::Geometry("curve collapsed during redistribution".into()));
        }
        self.curve = curve;
        Ok(self)
    }

    pub fn arc_length(&self) -> f64 {
        self.curve.arc_length()
    }
}

/// Quadratic sub-node refinement of an extreme node: fits x (or any
/// coordinate) through the node and its neighbors and returns the vertex
/// value. Falls back to the node value when the fit is not a proper extreme.
pub fn refined_extreme(prev: f64, at: f64, next: f64, maximum: bool) -> f64 {
    let c1 = 0.5 * (next - prev);
    let c2 = 0.5 * (next - 2.0 * at + prev);
    if c2 == 0.0 {
        return at;
    }
    let j = -c1 / (2.0 * c2);
    if !(j.abs() <= 1.0) {
        return at;
    }
    let v = at + c1 * j + c2 * j * j;
    if maximum {
        v.max(at)
    } else {
        v.min(at)
    }
}

/// Extreme x and |y| values of a closed curve with sub-node refinement.
pub fn curve_extremes(curve: &PolyCurve) -> (f64, f64, f64) {
    let n = curve.points.len();
    let get = |i: usize| curve.points[(i + n) % n];
    let mut i_min = 0;
    let mut i_max = 0;
    let mut i_top = 0;
    for i in 1..n {
        if curve.points[i].x < curve.points[i_min].x {
            i_min = i;
        }
        if curve.points[i].x > curve.points[i_max].x {
            i_max = i;
        }
        if curve.points[i].y.abs() > curve.points[i_top].y.abs() {
            i_top = i;
        }
    }
    let x_min = refined_extreme(
        get(i_min + n - 1).x,
        get(i_min).x,
        get(i_min + 1).x,
        false,
    );
    let x_max = refined_extreme(get(i_max + n - 1).x, get(i_max).x, get(i_max + 1).x, true);
    let height = refined_extreme(
        get(i_top + n - 1).y.abs(),
        get(i_top).y.abs(),
        get(i_top + 1).y.abs(),
        true,
    );
    (x_min, x_max, height)
}
