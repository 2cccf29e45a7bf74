//! Combined fattening verdict: the detachment slope of the freely evolving
//! lobe decides which side of the dichotomy the initial curve sits on, and
//! the level-set bracket on the even extension confirms it geometrically.
//! Fattening requires both signals; disagreement or a degenerate slope is
//! reported as undetermined with both sub-reports attached.

use crate::analysis::classify::{Outcome, SubReports, Verdict};
use crate::analysis::detachment::{estimate_detachment, DetachmentOpts};
use crate::error::Result;
use crate::geometry::profile::Profile;
use crate::levelset::fattening::{fattening_bracket, BracketVerdict};
use crate::levelset::grid::GridSpec;

#[derive(Debug, Clone)]
pub struct FatteningOpts {
    pub detachment: DetachmentOpts,
    /// Grid resolution per side for the bracket.
    pub grid_n: usize,
    /// Margin added around the even extension's bounding box.
    pub pad: f64,
    /// Bracket dilation radii in grid units (strictly decreasing).
    pub epsilons_dx: Vec<f64>,
    /// Time at which the bracket gap is measured.
    pub bracket_t: f64,
}

impl Default for FatteningOpts {
    fn default() -> Self {
        Self {
            detachment: DetachmentOpts::default(),
            grid_n: 256,
            pad: 1.4,
            epsilons_dx: vec![8.0, 6.0, 4.0],
            bracket_t: 0.25,
        }
    }
}

/// Runs both sub-analyses on a profile over [0, b] and combines them.
pub fn fattening_verdict(p: &Profile, a: f64, opts: &FatteningOpts) -> Result<Verdict> {
    let detach = estimate_detachment(p, a, &opts.detachment)?;

    let even = p.even_extend()?;
    let curve = even.to_closed_curve()?;
    let (lo, hi) = curve.bounding_box();
    let grid = GridSpec::square(
        lo.x - opts.pad,
        hi.x + opts.pad,
        lo.y - opts.pad,
        hi.y + opts.pad,
        opts.grid_n,
    )?;
    let dx = grid.dx();
    let epsilons: Vec<f64> = opts.epsilons_dx.iter().map(|e| e * dx).collect();
    let bracket = fattening_bracket(&curve, a, opts.bracket_t, &epsilons, &grid)?;

    // The dichotomy signal is the endpoint slope (= curvature defect at the
    // origin); the late-series sign confirms it once the endpoint has moved
    // beyond noise. Degenerate or contradictory signals stay undetermined.
    let degenerate = detach.is_degenerate();
    let late = detach.late_sign(1e-4 * (1.0 + p.b.abs()));
    let positive_side = detach.slope > 0.0 && late >= 0;
    let negative_side = detach.slope < 0.0 && late <= 0;

    let outcome = if degenerate {
        Outcome::Undetermined
    } else if positive_side && bracket.verdict == BracketVerdict::Fattening {
        Outcome::Fattening
    } else if negative_side && bracket.verdict == BracketVerdict::Regular {
        Outcome::Regular
    } else {
        Outcome::Undetermined
    };

    let mut verdict = Verdict::new(outcome)
        .with_metric("a_star_slope", detach.slope)
        .with_metric("fattening_gap_extrapolate", bracket.intercept)
        .with_metric("grid_dx", dx);
    if degenerate {
        verdict.confidence.push(format!(
            "detachment slope {:.3} inside the degenerate band +-{}",
            detach.slope, detach.degenerate_band
        ));
    }
    verdict.confidence.push(format!(
        "bracket gaps {:?} extrapolate to {:.4} ({} dx)",
        bracket.gaps,
        bracket.intercept,
        bracket.intercept / dx
    ));
    verdict.sub_reports = SubReports {
        detachment: Some(detach),
        bracket: Some(bracket),
    };
    Ok(verdict)
}
