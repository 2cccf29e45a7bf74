//! Long-run classification of an evolution trace into expanding, bounded, or
//! shrinking behavior, with supporting metrics.

use crate::geometry::point::Point2;
use crate::geometry::polyline::PolyCurve;
use crate::trace::{EventKind, EvolutionTrace};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Outcome {
    Expanding,
    Bounded,
    Shrinking,
    Fattening,
    Regular,
    Undetermined,
}

/// Classification result with metrics and optional sub-reports; serializes to
/// `{outcome, metrics, sub_reports:{a_star, bracket}, config_hash}`.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub metrics: BTreeMap<String, f64>,
    pub sub_reports: SubReports,
    /// Free-form confidence notes; the bounded case in particular is an
    /// unstable balance and is never reported as certain.
    pub confidence: Vec<String>,
    pub config_hash: Option<String>,
}

#[derive(Debug, Clone, Default, serde::Serialize, serde::Deserialize)]
pub struct SubReports {
    #[serde(rename = "a_star", skip_serializing_if = "Option::is_none")]
    pub detachment: Option<crate::analysis::detachment::DetachmentEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<crate::levelset::fattening::FatteningBracket>,
}

impl Verdict {
    pub fn new(outcome: Outcome) -> Self {
        Self {
            outcome,
            metrics: BTreeMap::new(),
            sub_reports: SubReports::default(),
            confidence: Vec::new(),
            config_hash: None,
        }
    }

    pub fn with_metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_string(), value);
        self
    }
}

/// Factor on 1/A giving the escape radius for the expanding call: once the
/// curve carries a ball beyond 1/A it grows forever, the margin makes the
/// call robust.
const ESCAPE_FACTOR: f64 = 2.0;

/// Relative band width treated as "stays in a fixed band".
const BAND_TOL: f64 = 0.1;

/// Classifies a completed run (ran to extinction or to its horizon).
pub fn classify(trace: &EvolutionTrace, a: f64) -> Verdict {
    if let Some(ext) = trace.events.first(EventKind::Extinction) {
        let mut v = Verdict::new(Outcome::Shrinking).with_metric("extinction_time", ext.t);
        if let Some(h) = ext.data.get("h").and_then(|x| x.as_f64()) {
            v = v.with_metric("final_height", h);
        }
        v.confidence
            .push("height and width collapsed together at the recorded time".into());
        return v;
    }
    let frames = &trace.frames;
    if frames.len() < 4 {
        return Verdict::new(Outcome::Undetermined);
    }
    let last = frames.last().unwrap();
    let t_end = last.t;

    // Expanding: beyond the escape radius with b(t)/t settling toward A.
    if a > 0.0 {
        let escape = ESCAPE_FACTOR / a;
        let i_mid = frames.len() * 3 / 4;
        let mid = &frames[i_mid];
        if last.diag.x_max > escape && last.diag.height > escape && mid.t > 0.0 {
            let s_end = last.diag.x_max / t_end;
            let s_mid = mid.diag.x_max / mid.t;
            if (s_end - s_mid).abs() < 0.1 * s_end.abs().max(1e-12) {
                let mut v = Verdict::new(Outcome::Expanding)
                    .with_metric("slope_b_over_t", s_end)
                    .with_metric("t_end", t_end);
                v.confidence.push(format!(
                    "x_max and height exceed the escape radius {escape}; growth rate settled"
                ));
                return v;
            }
        }
    }

    // Bounded: trailing half stays inside narrow bands.
    let tail = &frames[frames.len() / 2..];
    let band = |f: &dyn Fn(&crate::trace::Frame) -> f64| -> (f64, f64) {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for fr in tail {
            let v = f(fr);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    };
    let (h_lo, h_hi) = band(&|fr| fr.diag.height);
    let (b_lo, b_hi) = band(&|fr| fr.diag.x_max);
    let h_ok = h_lo > 0.0 && (h_hi - h_lo) / (0.5 * (h_hi + h_lo)) < BAND_TOL;
    let b_ok = b_lo > 0.0 && (b_hi - b_lo) / (0.5 * (b_hi + b_lo)) < BAND_TOL;
    if h_ok && b_ok {
        let mut v = Verdict::new(Outcome::Bounded)
            .with_metric("height_band", h_hi - h_lo)
            .with_metric("t_end", t_end);
        if a > 0.0 {
            if let Some(curve) = last.curves.first() {
                let n = 256;
                let reference = PolyCurve::circle(Point2::new(0.0, 0.0), 1.0 / a, n);
                if let Ok(d) = crate::geometry::polyline::hausdorff_distance(curve, &reference) {
                    v = v.with_metric("d_h_to_limit_circle", d);
                }
            }
        }
        v.confidence.push(
            "band-stable over the observed horizon only; the balanced state is unstable"
                .into(),
        );
        return v;
    }

    Verdict::new(Outcome::Undetermined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{ContactKind, Frame, FrameDiag};

    /// Synthetic trace of a ball following the radius ODE exactly.
    fn ball_trace(a: f64, r0: f64, t_end: f64, frames: usize) -> EvolutionTrace {
        let ball = crate::analysis::ball::BallState::new(a, r0).unwrap();
        let mut trace = EvolutionTrace::new(ContactKind::Vertical, 1e-3);
        for k in 0..=frames {
            let t = t_end * k as f64 / frames as f64;
            match ball.radius_at(t) {
                Ok(r) => {
                    let curve = PolyCurve::circle(Point2::new(0.0, 0.0), r, 128);
                    trace.frames.push(Frame {
                        t,
                        curves: vec![curve],
                        diag: FrameDiag {
                            x_min: -r,
                            x_max: r,
                            height: r,
                            area: std::f64::consts::PI * r * r,
                            max_curvature: 1.0 / r,
                            n_minima: 0,
                        },
                    });
                }
                Err(_) => {
                    let ext = ball.extinction_time().unwrap();
                    trace.events.push(
                        ext,
                        EventKind::Extinction,
                        serde_json::json!({"h": 0.0, "width": 0.0}),
                    );
                    break;
                }
            }
        }
        trace
    }

    #[test]
    fn synthetic_balls_classify_by_forcing_balance() {
        // Shrinking iff A R0 < 1, expanding iff > 1, bounded iff = 1.
        let v = classify(&ball_trace(1.0, 0.5, 1.0, 64), 1.0);
        assert_eq!(v.outcome, Outcome::Shrinking);
        let t_ext = v.metrics["extinction_time"];
        assert!((t_ext - (-0.5 - 0.5f64.ln())).abs() < 1e-9);

        let v = classify(&ball_trace(1.0, 2.0, 30.0, 64), 1.0);
        assert_eq!(v.outcome, Outcome::Expanding);
        assert!((v.metrics["slope_b_over_t"] - 1.0).abs() < 0.1);

        let v = classify(&ball_trace(1.0, 1.0, 10.0, 64), 1.0);
        assert_eq!(v.outcome, Outcome::Bounded);
        assert!(v.metrics["d_h_to_limit_circle"] < 1e-3);
    }

    #[test]
    fn short_trace_is_undetermined() {
        let v = classify(&ball_trace(1.0, 2.0, 0.01, 2), 1.0);
        assert_eq!(v.outcome, Outcome::Undetermined);
    }
}
