//! Interior gradient estimate (Evans-Spruck style) for graphs moving by
//! V = -kappa + A, and a per-frame audit of evolution traces against it.
//!
//! On B_R(x0) x (0, 2T) with |u(x0, T)| = v0 the slope bound is
//!   |grad u(x0, T)| <= e^(2K) (3 + 16 v0 / R),
//!   K = 20 v0^2/R^2 (4n + R^2/T + 4A/R + A/(2 v0)) + 2;
//! R = 1 recovers the unscaled form. The constants are generous by design:
//! the audit checks consistency, not sharpness.

use crate::error::{Error, Result};
use crate::trace::{upper_branch_points, ContactKind, EvolutionTrace};

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct GradientBound {
    pub k: f64,
    pub bound: f64,
}

/// Evaluates the interior gradient bound.
pub fn gradient_bound(v0: f64, n: u32, a: f64, t: f64, r: f64) -> Result<GradientBound> {
    if v0 <= 0.0 || t <= 0.0 || r <= 0.0 || n < 1 {
        return Err(Error::InvalidInput(format!(
            "need v0, T, R > 0 and n >= 1 (got v0={v0}, n={n}, T={t}, R={r})"
        )));
    }
    if a < 0.0 {
        return Err(Error::InvalidInput("driving force must be >= 0".into()));
    }
    let k = 20.0 * v0 * v0 / (r * r) * (4.0 * n as f64 + r * r / t + 4.0 * a / r + a / (2.0 * v0))
        + 2.0;
    let bound = (2.0 * k).exp() * (3.0 + 16.0 * v0 / r);
    Ok(GradientBound { k, bound })
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct GradientAuditFrame {
    pub t: f64,
    /// Max |u_x| over the set {u >= delta}; None when the set is empty.
    pub sup_slope: Option<f64>,
    pub bound: f64,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct GradientAuditReport {
    pub delta: f64,
    pub frames: Vec<GradientAuditFrame>,
    pub sup_over_run: f64,
    pub all_below_bound: bool,
    /// Frames where {u >= delta} was empty.
    pub vacuous_frames: usize,
}

/// Audits max |u_x| over {u >= delta} against the gradient bound evaluated
/// with matching parameters (v0 = the run's height, R = delta, T = elapsed
/// time) for every frame past the first.
pub fn gradient_bound_audit(trace: &EvolutionTrace, a: f64, delta: f64) -> Result<GradientAuditReport> {
    if delta <= 0.0 {
        return Err(Error::InvalidInput("delta must be positive".into()));
    }
    let height_max = trace
        .frames
        .iter()
        .map(|f| f.diag.height)
        .fold(0.0f64, f64::max)
        .max(delta);
    let mut frames = Vec::new();
    let mut sup_over_run = 0.0f64;
    let mut vacuous = 0usize;
    let mut all_below = true;
    for frame in trace.frames.iter().skip(1) {
        if frame.curves.is_empty() {
            break;
        }
        let pts = match trace.contact {
            ContactKind::Vertical if frame.curves[0].closed => {
                match upper_branch_points(&frame.curves[0]) {
                    Ok(p) => p,
                    Err(_) => continue,
                }
            }
            _ => frame.curves[0].points.clone(),
        };
        let mut sup: Option<f64> = None;
        for w in pts.windows(2) {
            if w[0].y >= delta && w[1].y >= delta && w[1].x > w[0].x {
                let slope = ((w[1].y - w[0].y) / (w[1].x - w[0].x)).abs();
                sup = Some(sup.map_or(slope, |s: f64| s.max(slope)));
            }
        }
        let bound = gradient_bound(height_max, 1, a, frame.t.max(1e-9), delta)?.bound;
        match sup {
            Some(s) => {
                sup_over_run = sup_over_run.max(s);
                if !(s.is_finite() && s <= bound) {
                    all_below = false;
                }
            }
            None => vacuous += 1,
        }
        frames.push(GradientAuditFrame {
            t: frame.t,
            sup_slope: sup,
            bound,
        });
    }
    Ok(GradientAuditReport {
        delta,
        frames,
        sup_over_run,
        all_below_bound: all_below && sup_over_run.is_finite(),
        vacuous_frames: vacuous,
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
    fn direct_formula_arithmetic() {
        // v0 = 0.1, n = 1, A = 1, T = 1, R = 1:
        // K = 0.2 (4 + 1 + 4 + 5) + 2 = 4.8, bound = 4.6 e^9.6.
        let g = gradient_bound(0.1, 1, 1.0, 1.0, 1.0).unwrap();
        assert!((g.k - 4.8).abs() < 1e-12, "K = {}", g.k);
        assert!((g.bound - 4.6 * (9.6f64).exp()).abs() < 1e-6);
        // A = 0 variant: K = 0.2 * 5 + 2 = 3, bound = 4.6 e^6.
        let g = gradient_bound(0.1, 1, 0.0, 1.0, 1.0).unwrap();
        assert!((g.k - 3.0).abs() < 1e-12);
        assert!((g.bound - 4.6 * (6.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn bound_monotone_in_height_and_forcing() {
        // Every occurrence of v0 and A in K and the prefactor is positive.
        let mut prev = 0.0;
        for i in 1..20 {
            let v0 = 0.05 * i as f64;
            let g = gradient_bound(v0, 1, 1.0, 1.0, 1.0).unwrap();
            assert!(g.bound > prev);
            prev = g.bound;
        }
        let mut prev = 0.0;
        for i in 0..20 {
            let a = 0.25 * i as f64;
            let g = gradient_bound(0.3, 1, a, 1.0, 1.0).unwrap();
            assert!(g.bound >= prev);
            prev = g.bound;
        }
    }

    #[test]
    fn nonpositive_inputs_error() {
        assert!(gradient_bound(0.0, 1, 1.0, 1.0, 1.0).is_err());
        assert!(gradient_bound(0.1, 1, 1.0, 0.0, 1.0).is_err());
        assert!(gradient_bound(0.1, 1, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn equilibrium_circle_cap_slope() {
        // Unit circle, A = 1: sup |u_x| on {u >= delta} is the cap slope
        // sqrt(1 - delta^2)/delta, constant in time.
        let delta = 0.5;
        let c = PolyCurve::circle(Point2::new(0.0, 0.0), 1.0, 628);
        let mc = MarkerCurve::from_curve(c, 0.01).unwrap();
        let tr = evolve_free(&mc, 1.0, 0.05, &TrackerOpts::with_frames(0.01)).unwrap();
        let rep = gradient_bound_audit(&tr, 1.0, delta).unwrap();
        let oracle = (1.0 - delta * delta).sqrt() / delta;
        for f in &rep.frames {
            let s = f.sup_slope.expect("set nonempty");
            assert!((s - oracle).abs() < 0.05 * oracle, "slope {s} vs {oracle}");
        }
        assert!(rep.all_below_bound);
    }

    #[test]
    fn oversized_delta_is_vacuous() {
        let c = PolyCurve::circle(Point2::new(0.0, 0.0), 0.3, 128);
        let mc = MarkerCurve::from_curve(c, 0.02).unwrap();
        let tr = evolve_free(&mc, 1.0, 0.01, &TrackerOpts::with_frames(0.005)).unwrap();
        let rep = gradient_bound_audit(&tr, 1.0, 1.0).unwrap();
        assert!(rep.vacuous_frames > 0);
        assert_eq!(rep.sup_over_run, 0.0);
    }
}
