//! Post-hoc event detection on evolution traces.

use crate::trace::{upper_branch_points, EventKind, EventLog, EvolutionTrace};

/// Scans a trace for singular events:
///
/// - `minima_loss`: the count of interior local minima of the upper branch
///   drops between frames;
/// - `axis_pinch`: some interior point of the upper branch falls below
///   2 target spacings while the height stays resolved;
/// - `boundary_touch`: the left endpoint crosses x = 0;
/// - `extinction` / `self_intersection` are copied from the run log.
pub fn detect_events(trace: &EvolutionTrace) -> EventLog {
    let mut log = EventLog::default();
    let res = trace.resolution;
    let pinch_level = 2.0 * res;

    let mut prev_minima: Option<usize> = None;
    let mut pinch_logged = false;
    for frame in &trace.frames {
        let m = frame.diag.n_minima;
        if let Some(pm) = prev_minima {
            if m < pm {
                log.push(
                    frame.t,
                    EventKind::MinimaLoss,
                    serde_json::json!({"from": pm, "to": m}),
                );
            }
        }
        prev_minima = Some(m);

        if !pinch_logged && frame.diag.height > 2.0 * pinch_level {
            if let Some(curve) = frame.curves.first() {
                if let Ok(branch) = upper_branch_points(curve) {
                    let (lo, hi) = (frame.diag.x_min, frame.diag.x_max);
                    let margin = 4.0 * res;
                    let pinched = branch.iter().any(|p| {
                        p.x > lo + margin && p.x < hi - margin && p.y < pinch_level
                    });
                    if pinched {
                        log.push(
                            frame.t,
                            EventKind::AxisPinch,
                            serde_json::json!({"height": frame.diag.height}),
                        );
                        pinch_logged = true;
                    }
                }
            }
        }
    }

    // Left endpoint crossing the axis x = 0: sign change between consecutive
    // samples that sit clear of the noise band around zero.
    let tol = 0.25 * res;
    let mut last_clear: Option<(f64, f64)> = None;
    for (t, a) in trace.x_min_series() {
        if a.abs() <= tol {
            continue;
        }
        if let Some((t0, a0)) = last_clear {
            if a0.signum() != a.signum() {
                let s = a0 / (a0 - a);
                log.push(
                    t0 + s * (t - t0),
                    EventKind::BoundaryTouch,
                    serde_json::json!({"from": a0, "to": a}),
                );
                break;
            }
        }
        last_clear = Some((t, a));
    }

    for e in &trace.events.events {
        if matches!(e.kind, EventKind::Extinction | EventKind::SelfIntersection) {
            log.events.push(e.clone());
        }
    }
    log.events.sort_by(|a, b| a.t.total_cmp(&b.t));
    log
}
