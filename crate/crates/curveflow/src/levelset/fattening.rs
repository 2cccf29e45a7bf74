//! Inner/outer bracket for fattening detection.
//!
//! The eps-dilated initial set approximates the closed evolution from above
//! and the eps-eroded set approximates the open evolution from below. If the
//! Hausdorff gap between the two zero contours at a fixed time extrapolates
//! (linearly in eps) to a positive limit, the interface evolution has grown
//! interior points.

use crate::error::{Error, Result};
use crate::geometry::point::Point2;
use crate::geometry::polyline::{hausdorff_distance_sets, PolyCurve};
use crate::levelset::evolve::{evolve, LevelSetOpts};
use crate::levelset::field::{signed_distance_raw, ScalarField2D};
use crate::levelset::grid::GridSpec;
use crate::trace::EventKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketVerdict {
    Fattening,
    Regular,
    Inconclusive,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct FatteningBracket {
    /// Strictly decreasing dilation radii.
    pub epsilons: Vec<f64>,
    /// Hausdorff distance between outer and inner zero contours at time t.
    pub gaps: Vec<f64>,
    /// Linear extrapolation of gap(eps) to eps = 0.
    pub intercept: f64,
    pub dx: f64,
    pub t: f64,
    pub verdict: BracketVerdict,
}

/// Verdict thresholds in grid units: fattening above 4 dx, regular below
/// 2 dx, inconclusive between.
const FATTENING_DX: f64 = 4.0;
const REGULAR_DX: f64 = 2.0;

pub fn fattening_bracket(
    initial: &PolyCurve,
    a: f64,
    t: f64,
    epsilons: &[f64],
    grid: &GridSpec,
) -> Result<FatteningBracket> {
    // The bracket only observes contours at the measurement time, so the
    // reinitialization cadence can be much sparser than the general default
    // (the contour moves a small fraction of a cell between reinits either
    // way).
    let mut ls = LevelSetOpts::with_frames(t);
    ls.reinit_every = 200;
    ls.reinit_iters = 10;
    fattening_bracket_with(initial, a, t, epsilons, grid, &ls)
}

pub fn fattening_bracket_with(
    initial: &PolyCurve,
    a: f64,
    t: f64,
    epsilons: &[f64],
    grid: &GridSpec,
    ls: &LevelSetOpts,
) -> Result<FatteningBracket> {
    let dx = grid.dx();
    if epsilons.len() < 2 {
        return Err(Error::InvalidInput("need at least two eps values".into()));
    }
    for w in epsilons.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::InvalidInput("eps values must be strictly decreasing".into()));
        }
    }
    if epsilons.iter().any(|&e| e <= 2.0 * dx) {
        return Err(Error::InvalidInput(format!(
            "eps values must exceed 2 dx = {}",
            2.0 * dx
        )));
    }

    // Signed distance of the initial curve, computed once; each bracket side
    // is a shift of it. Resample the curve near the grid resolution first:
    // distance accuracy only needs segments about one cell long.
    let target_segments = (initial.arc_length() / (0.75 * dx)).ceil() as usize;
    let curve = if initial.len() > target_segments {
        initial.resample(target_segments.max(64))?
    } else {
        initial.clone()
    };
    let sd = signed_distance_raw(&curve, grid)?;

    let mut opts = *ls;
    opts.frame_dt = t;
    let mut gaps = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let shift = |delta: f64| -> ScalarField2D {
            let mut f = ScalarField2D {
                grid: sd.grid,
                values: sd.values.iter().map(|v| v + delta).collect(),
                time: 0.0,
            };
            f.clamp_in_place();
            f
        };
        let (outer_trace, outer_field) = evolve(&shift(eps), a, t, &opts)?;
        let (inner_trace, _) = evolve(&shift(-eps), a, t, &opts)?;
        let outer = outer_trace.frames.last().unwrap().curves.clone();
        if outer_trace.events.contains(EventKind::Extinction) || outer.is_empty() {
            // Everything died before t; the bracket cannot distinguish a fat
            // interface from none at all.
            gaps.push(0.0);
            continue;
        }
        let inner = inner_trace.frames.last().unwrap().curves.clone();
        let gap = if inner_trace.events.contains(EventKind::Extinction) || inner.is_empty() {
            // Inner set vanished: the interface is at least as thick as the
            // outer region's inradius.
            region_inradius(&outer_field, &outer)
        } else {
            hausdorff_distance_sets(&outer, &inner)?
        };
        gaps.push(gap);
    }

    // Least-squares line gap = m eps + intercept.
    let n = epsilons.len() as f64;
    let sx: f64 = epsilons.iter().sum();
    let sy: f64 = gaps.iter().sum();
    let sxx: f64 = epsilons.iter().map(|e| e * e).sum();
    let sxy: f64 = epsilons.iter().zip(&gaps).map(|(e, g)| e * g).sum();
    let det = n * sxx - sx * sx;
    let intercept = if det.abs() > 1e-30 {
        (sy * sxx - sx * sxy) / det
    } else {
        gaps.iter().copied().fold(0.0, f64::max)
    };

    let verdict = if intercept > FATTENING_DX * dx {
        BracketVerdict::Fattening
    } else if intercept < REGULAR_DX * dx {
        BracketVerdict::Regular
    } else {
        BracketVerdict::Inconclusive
    };

    Ok(FatteningBracket {
        epsilons: epsilons.to_vec(),
        gaps,
        intercept,
        dx,
        t,
        verdict,
    })
}

/// Largest distance from an interior grid node to the contour set.
fn region_inradius(field: &ScalarField2D, contours: &[PolyCurve]) -> f64 {
    let g = field.grid;
    let mut best = 0.0f64;
    for j in 0..g.ny {
        for i in 0..g.nx {
            if field.get(i, j) <= 0.0 {
                continue;
            }
            let p: Point2 = g.point(i, j);
            let d = contours
                .iter()
                .map(|c| c.distance_to_point(p))
                .fold(f64::INFINITY, f64::min);
            best = best.max(d);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_circle_is_regular() {
        // Unique smooth flow: inner and outer brackets converge together.
        let grid = GridSpec::square(-1.6, 1.6, -1.6, 1.6, 160).unwrap();
        let dx = grid.dx();
        let curve = PolyCurve::circle(Point2::new(0.0, 0.0), 0.8, 512);
        let eps = [8.0 * dx, 6.0 * dx, 4.0 * dx];
        let b = fattening_bracket(&curve, 1.0, 0.08, &eps, &grid).unwrap();
        assert_eq!(b.verdict, BracketVerdict::Regular, "bracket: {b:?}");
    }

    #[test]
    fn rejects_bad_epsilons() {
        let grid = GridSpec::square(-1.0, 1.0, -1.0, 1.0, 64).unwrap();
        let curve = PolyCurve::circle(Point2::new(0.0, 0.0), 0.5, 128);
        let dx = grid.dx();
        assert!(fattening_bracket(&curve, 1.0, 0.05, &[4.0 * dx, 6.0 * dx], &grid).is_err());
        assert!(fattening_bracket(&curve, 1.0, 0.05, &[3.0 * dx, 1.0 * dx], &grid).is_err());
    }
}
