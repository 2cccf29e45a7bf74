use crate::error::{Error, Result};
use crate::geometry::point::Point2;
use crate::geometry::polyline::{resample_by_arclength_curved, PolyCurve};
use crate::geometry::profile::Profile;
use crate::trace::{
    count_interior_minima, upper_branch_points, ContactKind, EventKind, EvolutionTrace, Frame,
    FrameDiag,
};
use crate::tracker::marker::{curve_extremes, MarkerCurve, MIN_NODES};

/// Time-step selection for an evolution run.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum DtPolicy {
    Fixed(f64),
    /// Fraction of the stability bound (1.0 = at the bound).
    CflFraction(f64),
}

impl DtPolicy {
    fn dt(&self, bound: f64) -> f64 {
        match *self {
            DtPolicy::Fixed(dt) => dt,
            DtPolicy::CflFraction(f) => f * bound,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrackerOpts {
    pub dt_policy: DtPolicy,
    /// Frame interval; frames land on exact multiples so traces from
    /// different solvers can be aligned.
    pub frame_dt: f64,
    /// Halt the run when a self-intersection is detected (strict mode).
    pub strict: bool,
}

impl TrackerOpts {
    pub fn with_frames(frame_dt: f64) -> Self {
        Self {
            dt_policy: DtPolicy::CflFraction(1.0),
            frame_dt,
            strict: true,
        }
    }
}

/// Curve too short to resolve: treat as shrunk to a point. At this length the
/// caliper width in any direction is below 3 target spacings.
fn extinct(mc: &MarkerCurve) -> bool {
    mc.arc_length() < 6.0 * mc.target_spacing || mc.curve.len() <= MIN_NODES
}

/// Evolves a closed curve by V = -kappa + A in the whole plane.
///
/// The trace records frames at multiples of `frame_dt` plus the final state;
/// extinction (curve below resolution) and self-intersections are logged and
/// stop the run.
pub fn evolve_free(mc: &MarkerCurve, a: f64, t_end: f64, opts: &TrackerOpts) -> Result<EvolutionTrace> {
    let mut trace = EvolutionTrace::new(ContactKind::Vertical, mc.target_spacing);
    let mut cur = mc.clone();
    let mut t = 0.0;
    push_frame(&mut trace, t, cur.curve.clone(), cur.target_spacing)?;
    let mut frame_idx = 1usize;
    while t < t_end - 1e-14 {
        let next_frame_t = (frame_idx as f64 * opts.frame_dt).min(t_end);
        let dt_cfl = opts.dt_policy.dt(cur.cfl_dt()).min(cur.cfl_dt());
        let dt = dt_cfl.min(next_frame_t - t).max(1e-15);
        cur = cur.step(a, dt)?;
        t += dt;
        if t >= next_frame_t - 1e-14 {
            push_frame(&mut trace, t, cur.curve.clone(), cur.target_spacing)?;
            frame_idx += 1;
            if opts.strict && cur.curve.self_intersects() {
                trace
                    .events
                    .push(t, EventKind::SelfIntersection, serde_json::json!({}));
                return Ok(trace);
            }
        }
        if extinct(&cur) {
            let (x_min, x_max, height) = curve_extremes(&cur.curve);
            if t < next_frame_t - 1e-14 {
                push_frame(&mut trace, t, cur.curve.clone(), cur.target_spacing)?;
            }
            trace.events.push(
                t,
                EventKind::Extinction,
                serde_json::json!({"h": height, "width": x_max - x_min}),
            );
            return Ok(trace);
        }
    }
    Ok(trace)
}

/// Evolves a profile's closed lobe |y| = u(x) as a free curve in the whole
/// plane, recording the endpoint series x_min(t), x_max(t).
pub fn evolve_free_halfplane(
    p: &Profile,
    spacing: f64,
    a: f64,
    t_end: f64,
    opts: &TrackerOpts,
) -> Result<EvolutionTrace> {
    let lobe = p.to_closed_curve()?;
    let mc = MarkerCurve::from_curve(lobe, spacing)?;
    evolve_free(&mc, a, t_end, opts)
}

fn push_frame(trace: &mut EvolutionTrace, t: f64, curve: PolyCurve, spacing: f64) -> Result<()> {
    let (x_min, x_max, height) = curve_extremes(&curve);
    let kappa = curve.curvature()?;
    let max_curvature = kappa.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    let n_minima = match upper_branch_points(&curve) {
        Ok(branch) => count_interior_minima(&branch, 0.5 * spacing),
        Err(_) => 0,
    };
    trace.frames.push(Frame {
        t,
        diag: FrameDiag {
            x_min,
            x_max,
            height,
            area: curve.area(),
            max_curvature,
            n_minima,
        },
        curves: vec![curve],
    });
    Ok(())
}

/// Mirror-symmetric evolution: the curve is stored as its x >= 0 half, an
/// open path from the upper axis crossing around the lobe to the lower axis
/// crossing. Symmetry across the y-axis is enforced by construction; the axis
/// endpoints see mirrored ghost neighbors, which is the discrete Neumann
/// condition u_x(0, t) = 0.
#[derive(Debug, Clone)]
struct HalfCurve {
    /// pts[0] and pts[last] sit on the y-axis.
    pts: Vec<Point2>,
    target_spacing: f64,
}

impl HalfCurve {
    fn from_profile(p: &Profile, target_spacing: f64) -> Result<Self> {
        // Open path: (0, u(0)) -> upper branch -> (b, 0) -> lower branch ->
        // (0, -u(0)). For singular initial data u(0) = 0 both axis nodes
        // start at the origin and separate after the first step.
        if p.a.abs() > 1e-12 * p.b.abs().max(1.0) {
            return Err(Error::Geometry(
                "half-plane evolution needs a profile on [0, b]".into(),
            ));
        }
        let mut pts = Vec::with_capacity(2 * p.samples.len());
        pts.push(Point2::new(0.0, p.samples[0].1.max(0.0)));
        for &(x, u) in &p.samples[1..p.samples.len() - 1] {
            pts.push(Point2::new(x, u.max(0.0)));
        }
        pts.push(Point2::new(p.b, 0.0));
        for &(x, u) in p.samples[1..p.samples.len() - 1].iter().rev() {
            if u > 0.0 {
                pts.push(Point2::new(x, -u));
            }
        }
        pts.push(Point2::new(0.0, -p.samples[0].1.max(0.0)));
        pts.dedup_by(|a, b| a == b);
        let hc = Self {
            pts,
            target_spacing,
        };
        hc.redistributed()
    }

    fn cfl_dt(&self) -> f64 {
        0.4 * self.target_spacing * self.target_spacing / 2.0
    }

    /// Neighbor triple with mirrored ghosts at the axis endpoints.
    fn triple(&self, i: usize) -> (Point2, Point2, Point2) {
        let n = self.pts.len();
        let prev = if i == 0 {
            self.pts[1].mirror_x()
        } else {
            self.pts[i - 1]
        };
        let next = if i == n - 1 {
            self.pts[n - 2].mirror_x()
        } else {
            self.pts[i + 1]
        };
        (prev, self.pts[i], next)
    }

    fn step(&self, a: f64, dt: f64) -> Result<Self> {
        let bound = self.cfl_dt();
        if dt > bound * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt, bound });
        }
        let n = self.pts.len();
        let mut moved = Vec::with_capacity(n);
        for i in 0..n {
            let (prev, cur, next) = self.triple(i);
            // Full curve traverses the top rightward: clockwise. Signed
            // curvature therefore flips the Menger sign; outward normal is
            // the tangent rotated +90 degrees.
            let kappa =
                -crate::geometry::polyline::menger_curvature(prev, cur, next).unwrap_or(0.0);
            let t = (next - prev).normalized();
            let normal = t.perp();
            let mut p = cur + normal * (dt * (a - kappa));
            if i == 0 || i == n - 1 {
                p.x = 0.0;
            }
            moved.push(p);
        }
        moved.dedup_by(|p, q| p == q);
        if moved.len() < 3 {
            return Err(Error::Geometry("half curve collapsed".into()));
        }
        Self {
            pts: moved,
            target_spacing: self.target_spacing,
        }
        .redistributed()
    }

    fn redistributed(mut self) -> Result<Self> {
        let len: f64 = self.pts.windows(2).map(|w| w[0].dist(w[1])).sum();
        let count = ((len / self.target_spacing).round() as usize + 1).max(MIN_NODES);
        self.pts = resample_by_arclength_curved(&self.pts, false, count);
        self.pts[0].x = 0.0;
        let last = self.pts.len() - 1;
        self.pts[last].x = 0.0;
        self.pts.dedup_by(|p, q| p == q);
        if self.pts.len() < 3 {
            return Err(Error::Geometry("half curve collapsed".into()));
        }
        Ok(self)
    }

    fn arc_length(&self) -> f64 {
        self.pts.windows(2).map(|w| w[0].dist(w[1])).sum()
    }

    /// Full symmetric closed curve: right half plus its mirror image.
    fn full_curve(&self) -> Result<PolyCurve> {
        let mut pts = self.pts.clone();
        for p in self.pts[1..self.pts.len() - 1].iter().rev() {
            if p.x > 0.0 {
                pts.push(p.mirror_x());
            }
        }
        pts.dedup_by(|a, b| a == b);
        if pts.len() >= 2 && pts[0] == *pts.last().unwrap() {
            pts.pop();
        }
        PolyCurve::new(pts, true)
    }

    /// Open-path self-crossing test excluding endpoint touches.
    fn self_intersects(&self) -> bool {
        match PolyCurve::new(self.pts.clone(), false) {
            Ok(c) => c.self_intersects(),
            Err(_) => false,
        }
    }
}

/// Evolves the even extension of a profile on [0, b] as a mirror-symmetric
/// closed curve (the Neumann condition at the y-axis). The trace stores the
/// full even-extended curve per frame.
pub fn evolve_neumann(
    p: &Profile,
    spacing: f64,
    a: f64,
    t_end: f64,
    opts: &TrackerOpts,
) -> Result<EvolutionTrace> {
    let mut hc = HalfCurve::from_profile(p, spacing)?;
    let mut trace = EvolutionTrace::new(ContactKind::Vertical, spacing);
    let mut t = 0.0;
    push_frame(&mut trace, t, hc.full_curve()?, spacing)?;
    let mut frame_idx = 1usize;
    while t < t_end - 1e-14 {
        let next_frame_t = (frame_idx as f64 * opts.frame_dt).min(t_end);
        let dt_cfl = opts.dt_policy.dt(hc.cfl_dt()).min(hc.cfl_dt());
        let dt = dt_cfl.min(next_frame_t - t).max(1e-15);
        hc = hc.step(a, dt)?;
        t += dt;
        if t >= next_frame_t - 1e-14 {
            push_frame(&mut trace, t, hc.full_curve()?, spacing)?;
            frame_idx += 1;
            if opts.strict && hc.self_intersects() {
                trace
                    .events
                    .push(t, EventKind::SelfIntersection, serde_json::json!({}));
                return Ok(trace);
            }
        }
        // Half length below 3 spacings means the full curve is below 6.
        if hc.arc_length() < 3.0 * spacing || hc.pts.len() <= MIN_NODES / 2 {
            let full = hc.full_curve()?;
            let (x_min, x_max, height) = curve_extremes(&full);
            if t < next_frame_t - 1e-14 {
                push_frame(&mut trace, t, full, spacing)?;
            }
            trace.events.push(
                t,
                EventKind::Extinction,
                serde_json::json!({"h": height, "width": x_max - x_min}),
            );
            return Ok(trace);
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::ball::BallState;
    use crate::geometry::profile::{make_initial_curve, CurveFamily};

    fn circle_mc(r: f64, spacing: f64) -> MarkerCurve {
        let n = ((2.0 * std::f64::consts::PI * r / spacing).round() as usize).max(16);
        MarkerCurve::from_curve(PolyCurve::circle(Point2::new(0.0, 0.0), r, n), spacing).unwrap()
    }

    #[test]
    fn shrinking_circle_extinction_no_forcing() {
        // Oracle: R(t) = sqrt(R0^2 - 2t), extinction at 0.125.
        let mc = circle_mc(0.5, 0.02);
        let trace = evolve_free(&mc, 0.0, 0.2, &TrackerOpts::with_frames(0.005)).unwrap();
        let ext = trace.events.first(EventKind::Extinction).expect("extinct");
        assert!(
            (ext.t - 0.125).abs() < 0.005 * 0.125,
            "extinction at {}",
            ext.t
        );
    }

    #[test]
    fn shrinking_circle_extinction_with_forcing() {
        // Oracle: quadrature of R' = A - 1/R gives T = -0.5 - ln(0.5).
        let mc = circle_mc(0.5, 0.02);
        let trace = evolve_free(&mc, 1.0, 0.3, &TrackerOpts::with_frames(0.005)).unwrap();
        let ext = trace.events.first(EventKind::Extinction).expect("extinct");
        let oracle = BallState::new(1.0, 0.5).unwrap().extinction_time().unwrap();
        assert!(
            (ext.t - oracle).abs() < 0.01 * oracle,
            "extinction at {} vs {}",
            ext.t,
            oracle
        );
    }

    #[test]
    fn neumann_semicircle_fuses_and_grows_when_forcing_dominates() {
        // kappa at the origin is 2 < A = 3: the caps push outward across the
        // axis, so the height at the axis rises and b(t) exceeds b(0).
        let p = make_initial_curve(&CurveFamily::Semicircle { b0: 1.0 }).unwrap();
        let trace = evolve_neumann(&p, 0.01, 3.0, 0.02, &TrackerOpts::with_frames(0.002)).unwrap();
        let first = trace.frames.first().unwrap();
        let last = trace.frames.last().unwrap();
        assert!(last.diag.height > first.diag.height);
        assert!(last.diag.x_max > 1.0, "b(t) = {}", last.diag.x_max);
        // Mirror symmetry is enforced, so the extremes match exactly.
        assert!((last.diag.x_max + last.diag.x_min).abs() < 1e-12);
    }

    #[test]
    fn neumann_semicircle_shrinks_without_forcing() {
        // Two oracles for A = 0: the enclosing circle of radius 1 about the
        // origin bounds extinction by 0.5, and the area law dA/dt = -2 pi for
        // an embedded curve pins it at area/(2 pi) = (pi/2)/(2 pi) = 0.25.
        let p = make_initial_curve(&CurveFamily::Semicircle { b0: 1.0 }).unwrap();
        let trace = evolve_neumann(&p, 0.01, 0.0, 0.4, &TrackerOpts::with_frames(0.01)).unwrap();
        let ext = trace.events.first(EventKind::Extinction).expect("extinct");
        assert!(ext.t < 0.5, "ball comparison bound violated: {}", ext.t);
        assert!((ext.t - 0.25).abs() < 0.01, "area-law oracle: {}", ext.t);
    }

    #[test]
    fn free_lobe_mirrors_neumann_when_detached() {
        // For A = 3 the free end point goes negative, and the Neumann trace
        // must match the even extension evolved as one free closed curve.
        let p = make_initial_curve(&CurveFamily::Semicircle { b0: 1.0 }).unwrap();
        let spacing = 0.01;
        let t_end = 0.02;
        let opts = TrackerOpts::with_frames(0.005);
        let neumann = evolve_neumann(&p, spacing, 3.0, t_end, &opts).unwrap();
        let even = p.even_extend().unwrap();
        let full = even.to_closed_curve().unwrap();
        let mc = MarkerCurve::from_curve(full, spacing).unwrap();
        let free = evolve_free(&mc, 3.0, t_end, &opts).unwrap();
        let a = neumann.frames.last().unwrap();
        let b = free.frames.last().unwrap();
        let d = crate::geometry::polyline::hausdorff_distance(&a.curves[0], &b.curves[0]).unwrap();
        assert!(d < 2.0 * spacing, "neumann vs free: d_H = {d}");
    }
}
