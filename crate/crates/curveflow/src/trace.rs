//! Time series of curve snapshots with scalar diagnostics and an event log.
//!
//! Trace CSV schema: `t,a,b,h,area,max_kappa,n_minima`, with two extra columns
//! `theta_minus,theta_plus` for graph-flow runs with contact angles.

use crate::error::{Error, Result};
use crate::geometry::point::Point2;
use crate::geometry::polyline::PolyCurve;
use crate::geometry::profile::{Contact, Profile};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    AxisPinch,
    MinimaLoss,
    Extinction,
    SelfIntersection,
    BoundaryTouch,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub data: serde_json::Value,
}

#[derive(Debug, Clone, Default, serde::Serialize, serde::Deserialize)]
pub struct EventLog {
    pub events: Vec<Event>,
}

impl EventLog {
    pub fn push(&mut self, t: f64, kind: EventKind, data: serde_json::Value) {
        self.events.push(Event { t, kind, data });
    }

    pub fn first(&self, kind: EventKind) -> Option<&Event> {
        self.events.iter().find(|e| e.kind == kind)
    }

    pub fn contains(&self, kind: EventKind) -> bool {
        self.first(kind).is_some()
    }

    /// Events as JSON lines (`{t, kind, data}` per line).
    pub fn write_jsonl(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        for e in &self.events {
            let line = serde_json::to_string(e).map_err(|e| Error::InvalidInput(e.to_string()))?;
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Per-frame scalar diagnostics.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct FrameDiag {
    /// Leftmost x of the curve (the `a` column).
    pub x_min: f64,
    /// Rightmost x (the `b` column).
    pub x_max: f64,
    /// Max |y| (the `h` column).
    pub height: f64,
    pub area: f64,
    pub max_curvature: f64,
    /// Interior local minima of the upper branch u(., t).
    pub n_minima: usize,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Frame {
    pub t: f64,
    /// Zero-contour components (level set) or the marker curve (tracker).
    pub curves: Vec<PolyCurve>,
    pub diag: FrameDiag,
}

/// Endpoint treatment of the evolving curve, recorded for audits.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum ContactKind {
    /// Closed curve or vertical contact with the axis.
    Vertical,
    /// Prescribed contact angles (theta_minus, theta_plus) in radians.
    Angles(f64, f64),
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct EvolutionTrace {
    pub frames: Vec<Frame>,
    pub events: EventLog,
    pub contact: ContactKind,
    /// Spatial resolution of the producing solver (marker spacing or grid dx).
    pub resolution: f64,
}

impl EvolutionTrace {
    pub fn new(contact: ContactKind, resolution: f64) -> Self {
        Self {
            frames: Vec::new(),
            events: EventLog::default(),
            contact,
            resolution,
        }
    }

    pub fn last_t(&self) -> f64 {
        self.frames.last().map(|f| f.t).unwrap_or(0.0)
    }

    pub fn times(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.t).collect()
    }

    /// Series of (t, x_min): the left endpoint of the freely evolving curve.
    pub fn x_min_series(&self) -> Vec<(f64, f64)> {
        self.frames.iter().map(|f| (f.t, f.diag.x_min)).collect()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        match self.contact {
            ContactKind::Vertical => {
                writeln!(f, "t,a,b,h,area,max_kappa,n_minima")?;
                for fr in &self.frames {
                    let d = &fr.diag;
                    writeln!(
                        f,
                        "{},{},{},{},{},{},{}",
                        fr.t, d.x_min, d.x_max, d.height, d.area, d.max_curvature, d.n_minima
                    )?;
                }
            }
            ContactKind::Angles(tm, tp) => {
                writeln!(f, "t,a,b,h,area,max_kappa,n_minima,theta_minus,theta_plus")?;
                for fr in &self.frames {
                    let d = &fr.diag;
                    writeln!(
                        f,
                        "{},{},{},{},{},{},{},{},{}",
                        fr.t, d.x_min, d.x_max, d.height, d.area, d.max_curvature, d.n_minima, tm, tp
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Extracts the upper branch of a closed rotated-graph curve as a profile.
///
/// Walks from the leftmost to the rightmost node along the arc containing the
/// topmost node. Fails if the branch is not x-monotone (not a rotated graph).
pub fn upper_branch_profile(curve: &PolyCurve, contact: ContactKind) -> Result<Profile> {
    let pts = upper_branch_points(curve)?;
    let mut samples: Vec<(f64, f64)> = pts.iter().map(|p| (p.x, p.y.max(0.0))).collect();
    // Endpoints of the branch sit on (or numerically near) the axis.
    if let Some(first) = samples.first_mut() {
        first.1 = 0.0;
    }
    if let Some(last) = samples.last_mut() {
        last.1 = 0.0;
    }
    samples.dedup_by(|a, b| a.0 == b.0);
    let (lc, rc) = match contact {
        ContactKind::Vertical => (Contact::Vertical, Contact::Vertical),
        ContactKind::Angles(tm, tp) => (Contact::Angle(tm), Contact::Angle(tp)),
    };
    Profile::new(samples, lc, rc)
}

/// Nodes of the arc from the leftmost to the rightmost node that passes
/// through the topmost node, in increasing x.
pub fn upper_branch_points(curve: &PolyCurve) -> Result<Vec<Point2>> {
    let n = curve.points.len();
    if n < 3 {
        return Err(Error::Geometry("curve too small".into()));
    }
    let left = (0..n)
        .min_by(|&i, &j| curve.points[i].x.total_cmp(&curve.points[j].x))
        .unwrap();
    let right = (0..n)
        .max_by(|&i, &j| curve.points[i].x.total_cmp(&curve.points[j].x))
        .unwrap();
    let top = (0..n)
        .max_by(|&i, &j| curve.points[i].y.total_cmp(&curve.points[j].y))
        .unwrap();
    // Arc from left to right walking forward; check whether it contains top.
    let forward: Vec<usize> = arc_indices(left, right, n, true);
    let arc = if forward.contains(&top) {
        forward
    } else {
        arc_indices(left, right, n, false)
    };
    let mut pts: Vec<Point2> = arc.into_iter().map(|i| curve.points[i]).collect();
    if pts.first().unwrap().x > pts.last().unwrap().x {
        pts.reverse();
    }
    for w in pts.windows(2) {
        if w[1].x < w[0].x - 1e-12 {
            return Err(Error::Geometry(
                "upper branch is not x-monotone (curve is not a rotated graph)".into(),
            ));
        }
    }
    // Drop exact x-duplicates from flat spots.
    pts.dedup_by(|a, b| a.x == b.x);
    Ok(pts)
}

fn arc_indices(from: usize, to: usize, n: usize, forward: bool) -> Vec<usize> {
    let mut out = vec![from];
    let mut i = from;
    while i != to {
        i = if forward { (i + 1) % n } else { (i + n - 1) % n };
        out.push(i);
    }
    out
}

/// Counts interior local minima of the upper branch with at least the given
/// topographic prominence. Below-resolution dips do not count.
pub fn count_interior_minima(upper: &[Point2], prominence: f64) -> usize {
    let n = upper.len();
    if n < 3 {
        return 0;
    }
    let ys: Vec<f64> = upper.iter().map(|p| p.y).collect();
    let mut count = 0;
    let mut i = 1;
    while i + 1 < n {
        if ys[i] <= ys[i - 1] && ys[i] <= ys[i + 1] && (ys[i] < ys[i - 1] || ys[i] < ys[i + 1]) {
            // Candidate minimum: measure rise on both sides before a lower
            // point appears.
            let v = ys[i];
            let mut left_rise = 0.0f64;
            for j in (0..i).rev() {
                if ys[j] < v {
                    break;
                }
                left_rise = left_rise.max(ys[j] - v);
            }
            let mut right_rise = 0.0f64;
            for y in ys.iter().take(n).skip(i + 1) {
                if *y < v {
                    break;
                }
                right_rise = right_rise.max(*y - v);
            }
            if left_rise.min(right_rise) >= prominence {
                count += 1;
            }
        }
        i += 1;
    }
    count
}
