//! Framewise monotonicity audit of intersection numbers between two evolving
//! curves, compared through their extension curves.

use crate::analysis::intersection::{intersection_number, IntersectionReport};
use crate::error::{Error, Result};
use crate::graph::extension::{extension_curve_of_closed, extension_curve_of_points, ExtensionCurve};
use crate::trace::{ContactKind, EvolutionTrace, Frame};

/// Which monotonicity the pair of runs is expected to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditMode {
    /// Mixed contact angles (one run angled, one vertical): the count never
    /// increases.
    StrictNonincreasing,
    /// Both runs vertical: the count never increases while positive, and
    /// once it reaches zero it may return to at most one.
    NonincreasingWhilePositive,
}

#[derive(Debug, Clone)]
pub struct AuditViolation {
    pub t_prev: f64,
    pub t: f64,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone)]
pub struct AuditOutcome {
    /// (t, count, clean) per common frame; frames with tangential contacts
    /// are transition frames and are skipped by the monotonicity comparison.
    pub series: Vec<(f64, usize, bool)>,
    pub violations: Vec<AuditViolation>,
}

/// Runs the audit over the common frames of two traces.
///
/// Identical traces short-circuit to an empty outcome (the count is not
/// defined for coinciding curves). Misaligned frame times are an error.
pub fn monotonicity_audit(
    a: &EvolutionTrace,
    b: &EvolutionTrace,
    mode: AuditMode,
) -> Result<AuditOutcome> {
    if a.frames.len() != b.frames.len() {
        return Err(Error::TraceMismatch(format!(
            "frame counts differ: {} vs {}",
            a.frames.len(),
            b.frames.len()
        )));
    }
    for (fa, fb) in a.frames.iter().zip(&b.frames) {
        if (fa.t - fb.t).abs() > 1e-9 * (1.0 + fa.t.abs()) {
            return Err(Error::TraceMismatch(format!(
                "frame times differ: {} vs {}",
                fa.t, fb.t
            )));
        }
    }
    if traces_identical(a, b) {
        return Ok(AuditOutcome {
            series: Vec::new(),
            violations: Vec::new(),
        });
    }

    let mut series = Vec::with_capacity(a.frames.len());
    for (fa, fb) in a.frames.iter().zip(&b.frames) {
        if fa.curves.is_empty() || fb.curves.is_empty() {
            break; // one side extinct: nothing left to compare
        }
        let ea = frame_extension(fa, a.contact)?;
        let eb = frame_extension(fb, b.contact)?;
        let rep: IntersectionReport = intersection_number(
            (&ea).into(),
            (&eb).into(),
            crate::analysis::intersection::DEFAULT_ANGLE_TOL,
        );
        series.push((fa.t, rep.count, rep.is_clean()));
    }

    let mut violations = Vec::new();
    match mode {
        AuditMode::StrictNonincreasing => {
            let mut prev: Option<(f64, usize)> = None;
            for &(t, count, clean) in &series {
                if !clean {
                    continue;
                }
                if let Some((t0, c0)) = prev {
                    if count > c0 {
                        violations.push(AuditViolation {
                            t_prev: t0,
                            t,
                            from: c0,
                            to: count,
                        });
                    }
                }
                prev = Some((t, count));
            }
        }
        AuditMode::NonincreasingWhilePositive => {
            let mut prev: Option<(f64, usize)> = None;
            let mut hit_zero = false;
            for &(t, count, clean) in &series {
                if !clean {
                    continue;
                }
                if let Some((t0, c0)) = prev {
                    let allowed = if hit_zero {
                        // After a zero the count may pop back up to one.
                        count <= 1.max(c0)
                    } else {
                        count <= c0
                    };
                    if !allowed {
                        violations.push(AuditViolation {
                            t_prev: t0,
                            t,
                            from: c0,
                            to: count,
                        });
                    }
                }
                hit_zero = hit_zero || count == 0;
                prev = Some((t, count));
            }
        }
    }

    Ok(AuditOutcome { series, violations })
}

fn frame_extension(frame: &Frame, contact: ContactKind) -> Result<ExtensionCurve> {
    let curve = &frame.curves[0];
    match contact {
        ContactKind::Vertical => {
            if curve.closed {
                extension_curve_of_closed(curve)
            } else {
                Ok(extension_curve_of_points(
                    curve.points.clone(),
                    crate::geometry::profile::Contact::Vertical,
                    crate::geometry::profile::Contact::Vertical,
                ))
            }
        }
        ContactKind::Angles(tm, tp) => Ok(extension_curve_of_points(
            curve.points.clone(),
            crate::geometry::profile::Contact::Angle(tm),
            crate::geometry::profile::Contact::Angle(tp),
        )),
    }
}

fn traces_identical(a: &EvolutionTrace, b: &EvolutionTrace) -> bool {
    a.frames.len() == b.frames.len()
        && a.frames.iter().zip(&b.frames).all(|(fa, fb)| {
            fa.curves.len() == fb.curves.len()
                && fa
                    .curves
                    .iter()
                    .zip(&fb.curves)
                    .all(|(ca, cb)| ca.points == cb.points)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point::Point2;
    use crate::geometry::polyline::PolyCurve;
    use crate::tracker::evolve::{evolve_free, TrackerOpts};
    use crate::tracker::marker::MarkerCurve;

    #[test]
    fn identical_traces_short_circuit() {
        let c = PolyCurve::circle(Point2::new(0.5, 0.0), 0.4, 128);
        let mc = MarkerCurve::from_curve(c, 0.02).unwrap();
        let tr = evolve_free(&mc, 1.0, 0.02, &TrackerOpts::with_frames(0.005)).unwrap();
        let out = monotonicity_audit(&tr, &tr, AuditMode::NonincreasingWhilePositive).unwrap();
        assert!(out.series.is_empty() && out.violations.is_empty());
    }

    #[test]
    fn misaligned_traces_error() {
        let c = PolyCurve::circle(Point2::new(0.5, 0.0), 0.4, 128);
        let mc = MarkerCurve::from_curve(c, 0.02).unwrap();
        let t1 = evolve_free(&mc, 1.0, 0.02, &TrackerOpts::with_frames(0.005)).unwrap();
        let t2 = evolve_free(&mc, 1.0, 0.02, &TrackerOpts::with_frames(0.004)).unwrap();
        assert!(monotonicity_audit(&t1, &t2, AuditMode::StrictNonincreasing).is_err());
    }

    #[test]
    fn translate_pair_stays_at_most_once() {
        // A cap and its horizontal translate: congruent shapes evolving
        // identically cross at most once for all time.
        let p = crate::geometry::profile::make_initial_curve(
            &crate::geometry::profile::CurveFamily::Circle { r: 0.5, cx: 0.0 },
        )
        .unwrap();
        let q = crate::geometry::profile::make_initial_curve(
            &crate::geometry::profile::CurveFamily::Circle { r: 0.5, cx: 0.6 },
        )
        .unwrap();
        let opts = TrackerOpts::with_frames(0.005);
        let ta = crate::tracker::evolve_free_halfplane(&p, 0.01, 0.8, 0.06, &opts).unwrap();
        let tb = crate::tracker::evolve_free_halfplane(&q, 0.01, 0.8, 0.06, &opts).unwrap();
        let out = monotonicity_audit(&ta, &tb, AuditMode::NonincreasingWhilePositive).unwrap();
        assert!(out.violations.is_empty(), "violations: {:?}", out.violations);
        for &(t, count, clean) in &out.series {
            if clean {
                assert!(count <= 1, "count {count} at t = {t}");
            }
        }
    }
}
