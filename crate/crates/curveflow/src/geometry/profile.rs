use crate::error::{Error, Result};
use crate::geometry::point::Point2;
use crate::geometry::polyline::PolyCurve;

/// How a profile meets the x-axis at an endpoint.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Contact {
    /// Finite contact angle theta in (0, pi/2): slope magnitude tan(theta).
    Angle(f64),
    /// Vertical tangent (slope blows up at the endpoint).
    Vertical,
}

impl Contact {
    pub fn angle(self) -> f64 {
        match self {
            Contact::Angle(t) => t,
            Contact::Vertical => std::f64::consts::FRAC_PI_2,
        }
    }
}

/// Graph profile u over [a, b] with endpoint contact data. The axisymmetric
/// lower branch |y| = u is implicit everywhere; profiles store u >= 0 only.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Profile {
    pub a: f64,
    pub b: f64,
    /// (x, u) samples, x strictly increasing, u(a) = u(b) = 0 within tolerance.
    pub samples: Vec<(f64, f64)>,
    pub left_contact: Contact,
    pub right_contact: Contact,
}

impl Profile {
    pub fn new(
        samples: Vec<(f64, f64)>,
        left_contact: Contact,
        right_contact: Contact,
    ) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::Geometry("profile needs at least 3 samples".into()));
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Geometry("profile x not strictly increasing".into()));
            }
        }
        if samples.iter().any(|&(x, u)| !x.is_finite() || !u.is_finite()) {
            return Err(Error::Geometry("non-finite profile sample".into()));
        }
        let a = samples.first().unwrap().0;
        let b = samples.last().unwrap().0;
        let span = b - a;
        let end_tol = 1e-6 * span.max(1.0);
        let u_a = samples.first().unwrap().1;
        let u_b = samples.last().unwrap().1;
        if u_a.abs() > end_tol || u_b.abs() > end_tol {
            return Err(Error::Geometry(format!(
                "profile must vanish at endpoints (u(a)={u_a}, u(b)={u_b})"
            )));
        }
        if samples.iter().any(|&(_, u)| u < -end_tol) {
            return Err(Error::Geometry("profile must satisfy u >= 0".into()));
        }
        Ok(Self {
            a,
            b,
            samples,
            left_contact,
            right_contact,
        })
    }

    pub fn height(&self) -> f64 {
        self.samples.iter().map(|&(_, u)| u).fold(0.0, f64::max)
    }

    /// Linear interpolation of u at x (0 outside [a, b]).
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.a || x >= self.b {
            return 0.0;
        }
        let idx = self
            .samples
            .partition_point(|&(sx, _)| sx <= x)
            .saturating_sub(1);
        let (x0, u0) = self.samples[idx];
        let (x1, u1) = self.samples[(idx + 1).min(self.samples.len() - 1)];
        if x1 == x0 {
            return u0;
        }
        u0 + (u1 - u0) * (x - x0) / (x1 - x0)
    }

    /// Mirror extension across x = 0 for a profile on [0, b].
    ///
    /// Produces the profile on [-b, b] with u(-x) = u(x); the sample count
    /// doubles minus one.
    pub fn even_extend(&self) -> Result<Profile> {
        if self.a.abs() > 1e-12 * self.b.abs().max(1.0) {
            return Err(Error::Geometry(format!(
                "even extension needs a profile on [0, b], got a = {}",
                self.a
            )));
        }
        let mut samples: Vec<(f64, f64)> = self.samples[1..]
            .iter()
            .rev()
            .map(|&(x, u)| (-x, u))
            .collect();
        samples.extend(self.samples.iter().copied());
        Profile::new(samples, self.right_contact, self.right_contact)
    }

    /// Restriction to x >= 0 (inverse of `even_extend` on even profiles).
    pub fn restrict_nonneg(&self) -> Result<Profile> {
        let samples: Vec<(f64, f64)> = self
            .samples
            .iter()
            .copied()
            .filter(|&(x, _)| x >= -1e-15)
            .collect();
        Profile::new(samples, self.left_contact, self.right_contact)
    }

    /// Curvature of the rotated curve |y| = u(x) at the origin, for profiles
    /// with a vertical left contact at x = 0.
    ///
    /// The graph-form limit -u''/(1+u'^2)^(3/2) is 0/inf at a vertical
    /// tangent, so the estimate fits a circle with center on the x-axis
    /// through the first `fit_nodes` samples: x^2 + u^2 = 2 c x solved by
    /// least squares, curvature = 1/c.
    pub fn curvature_at_origin(&self, fit_nodes: usize) -> Result<f64> {
        if self.left_contact != Contact::Vertical {
            return Err(Error::Geometry(
                "curvature_at_origin needs a vertical left contact".into(),
            ));
        }
        if self.a.abs() > 1e-12 * self.b.abs().max(1.0) {
            return Err(Error::Geometry("curvature_at_origin needs a = 0".into()));
        }
        let k = fit_nodes.max(3);
        if self.samples.len() < k + 1 {
            return Err(Error::Geometry(format!(
                "too few samples near the origin: need {} interior, have {}",
                k,
                self.samples.len().saturating_sub(1)
            )));
        }
        // Least squares for x^2 + u^2 = alpha x + beta over the first k
        // interior samples; with the origin on the circle, beta ~ 0 and the
        // center sits at (alpha/2, 0).
        let pts = &self.samples[1..=k];
        let (mut sxx, mut sx, mut sxr, mut sr, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(x, u) in pts {
            let r = x * x + u * u;
            sxx += x * x;
            sx += x;
            sxr += x * r;
            sr += r;
            n += 1.0;
        }
        let det = sxx * n - sx * sx;
        if det.abs() < 1e-30 {
            return Err(Error::Geometry("degenerate circle fit at origin".into()));
        }
        let alpha = (sxr * n - sx * sr) / det;
        let c = 0.5 * alpha;
        if !(c.is_finite()) || c <= 0.0 {
            return Err(Error::Geometry(format!("circle fit gave center {c}")));
        }
        Ok(1.0 / c)
    }

    /// Closed curve |y| = u(x) traced through the upper then lower branch,
    /// normalized to counterclockwise orientation. Interior samples with
    /// u = 0 (an axis touch) appear once per branch passage.
    pub fn to_closed_curve(&self) -> Result<PolyCurve> {
        let mut pts: Vec<Point2> = Vec::with_capacity(2 * self.samples.len());
        // Upper branch, left to right; endpoints pinned to the axis.
        pts.push(Point2::new(self.a, 0.0));
        for &(x, u) in &self.samples[1..self.samples.len() - 1] {
            pts.push(Point2::new(x, u.max(0.0)));
        }
        pts.push(Point2::new(self.b, 0.0));
        // Lower branch, right to left.
        for &(x, u) in self.samples[1..self.samples.len() - 1].iter().rev() {
            if u > 0.0 {
                pts.push(Point2::new(x, -u));
            }
            // Samples with u = 0 already lie on the upper path; repeating them
            // would create duplicate consecutive points around the touch.
        }
        // Drop consecutive duplicates from flat axis touches.
        pts.dedup_by(|a, b| a == b);
        PolyCurve::closed_ccw(pts)
    }
}

/// Result of the cylinder-crossing regularity check.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AlphaReport {
    pub is_alpha_domain: bool,
    pub alpha: f64,
    /// Failing level and its crossing count, when the check fails.
    pub witness: Option<(f64, usize)>,
    /// |du/dx| threshold used to call a crossing transverse.
    pub transversality_tol: f64,
}

/// Minimum slope magnitude at a crossing for it to count as transverse.
pub const TRANSVERSALITY_TOL: f64 = 1e-6;

/// Number of levels rho in (0, alpha] sampled by `check_alpha_domain`.
const ALPHA_LEVELS: usize = 32;

/// Checks that the rotated domain {|y| < u(x)} meets every cylinder of radius
/// rho <= alpha exactly twice, transversally (AAG's alpha-domain condition).
///
/// Levels are sampled in (0, alpha]; a crossing is transverse when the local
/// slope magnitude exceeds `TRANSVERSALITY_TOL`.
pub fn check_alpha_domain(p: &Profile, alpha: f64) -> AlphaReport {
    let mut report = AlphaReport {
        is_alpha_domain: true,
        alpha,
        witness: None,
        transversality_tol: TRANSVERSALITY_TOL,
    };
    if alpha <= 0.0 {
        report.is_alpha_domain = false;
        return report;
    }
    for level in 1..=ALPHA_LEVELS {
        let rho = alpha * level as f64 / ALPHA_LEVELS as f64;
        let (count, tangential) = crossings_at_level(p, rho);
        if count != 2 || tangential {
            report.is_alpha_domain = false;
            report.witness = Some((rho, count));
            return report;
        }
    }
    report
}

/// Counts transversal crossings of u = rho; the flag reports a tangential
/// contact (sub-threshold slope, or a touch without sign change).
///
/// Sign changes are tracked across nodes that land exactly on the level, so
/// a flip through such a node still counts as one crossing.
fn crossings_at_level(p: &Profile, rho: f64) -> (usize, bool) {
    let mut count = 0;
    let mut tangential = false;
    let mut last: Option<(usize, f64)> = None; // (index, sign) of last off-level node
    let mut touched_since_last = false;
    for (i, &(_, u)) in p.samples.iter().enumerate() {
        let d = u - rho;
        if d == 0.0 {
            touched_since_last = true;
            continue;
        }
        let sign = d.signum();
        if let Some((j, prev_sign)) = last {
            if sign != prev_sign {
                let (x0, u0) = p.samples[j];
                let (x1, u1) = p.samples[i];
                let slope = (u1 - u0) / (x1 - x0);
                if slope.abs() >= TRANSVERSALITY_TOL {
                    count += 1;
                } else {
                    tangential = true;
                }
            } else if touched_since_last {
                // Touched the level and came back on the same side.
                tangential = true;
            }
        }
        last = Some((i, sign));
        touched_since_last = false;
    }
    (count, tangential)
}

/// Family of built-in initial curves.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum CurveFamily {
    /// u0(x) = sqrt(x (b0 - x)) on [0, b0]: the circle of diameter b0 tangent
    /// to the y-axis at the origin.
    Semicircle { b0: f64 },
    /// u0(x) = sqrt(x (b0 - x)) (base + amp cos(freq pi x / b0)).
    Dumbbell {
        b0: f64,
        base: f64,
        amp: f64,
        freq: f64,
    },
    /// Circle of radius r centered at (cx, 0), as the profile
    /// u0(x) = sqrt(r^2 - (x - cx)^2) on [cx - r, cx + r].
    Circle { r: f64, cx: f64 },
    /// Profile loaded from a CSV file with header `x,u`.
    Samples { path: String },
}

/// Default sample count for the analytic families.
pub const FAMILY_SAMPLES: usize = 2001;

/// Builds the initial profile for a curve family.
///
/// Analytic families get vertical contacts at both endpoints and must be
/// positive in the interior; parameters violating that are rejected.
pub fn make_initial_curve(family: &CurveFamily) -> Result<Profile> {
    make_initial_curve_sampled(family, FAMILY_SAMPLES)
}

pub fn make_initial_curve_sampled(family: &CurveFamily, count: usize) -> Result<Profile> {
    match family {
        CurveFamily::Semicircle { b0 } => {
            sampled_profile(0.0, *b0, count, |x| (x * (b0 - x)).max(0.0).sqrt())
        }
        CurveFamily::Dumbbell {
            b0,
            base,
            amp,
            freq,
        } => sampled_profile(0.0, *b0, count, |x| {
            (x * (b0 - x)).max(0.0).sqrt()
                * (base + amp * (freq * std::f64::consts::PI * x / b0).cos())
        }),
        CurveFamily::Circle { r, cx } => sampled_profile(cx - r, cx + r, count, |x| {
            (r * r - (x - cx) * (x - cx)).max(0.0).sqrt()
        }),
        CurveFamily::Samples { path } => crate::geometry::io::read_profile(path.as_ref()),
    }
}

fn sampled_profile(a: f64, b: f64, count: usize, f: impl Fn(f64) -> f64) -> Result<Profile> {
    if !(a < b) {
        return Err(Error::InvalidInput(format!("bad interval [{a}, {b}]")));
    }
    let n = count.max(9);
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let x = a + (b - a) * i as f64 / (n - 1) as f64;
        let u = if i == 0 || i == n - 1 { 0.0 } else { f(x) };
        if i != 0 && i != n - 1 && u <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "initial profile not positive in the interior (u({x}) = {u})"
            )));
        }
        samples.push((x, u));
    }
    Profile::new(samples, Contact::Vertical, Contact::Vertical)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn semicircle() -> Profile {
        make_initial_curve(&CurveFamily::Semicircle { b0: 1.0 }).unwrap()
    }

    #[test]
    fn semicircle_midpoint() {
        let p = semicircle();
        assert!((p.eval(0.5) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn dumbbell_matches_formula() {
        // Direct formula oracle at x = 0.5:
        // sqrt(0.25) * (0.5 + 0.4 cos(pi)) = 0.05.
        let p = make_initial_curve(&CurveFamily::Dumbbell {
            b0: 1.0,
            base: 0.5,
            amp: 0.4,
            freq: 2.0,
        })
        .unwrap();
        assert!((p.eval(0.5) - 0.05).abs() < 1e-9, "got {}", p.eval(0.5));
    }

    #[test]
    fn nonpositive_family_rejected() {
        // base < amp makes the envelope dip below zero somewhere.
        let r = make_initial_curve(&CurveFamily::Dumbbell {
            b0: 1.0,
            base: 0.3,
            amp: 0.5,
            freq: 2.0,
        });
        assert!(r.is_err());
    }

    #[test]
    fn even_extend_mirrors() {
        let p = semicircle();
        let e = p.even_extend().unwrap();
        assert_eq!(e.samples.len(), 2 * p.samples.len() - 1);
        assert!((e.eval(-0.3) - p.eval(0.3)).abs() < 1e-12);
        assert!((e.eval(-0.3) - 0.458257569495584).abs() < 1e-9);
    }

    #[test]
    fn even_extend_requires_zero_left_end() {
        let p = make_initial_curve(&CurveFamily::Circle { r: 0.5, cx: 1.0 }).unwrap();
        assert!(p.even_extend().is_err());
    }

    #[test]
    fn even_extend_then_restrict_is_identity() {
        let p = semicircle();
        let back = p.even_extend().unwrap().restrict_nonneg().unwrap();
        assert_eq!(back.samples.len(), p.samples.len());
        for (s, t) in back.samples.iter().zip(p.samples.iter()) {
            assert!((s.0 - t.0).abs() < 1e-14 && (s.1 - t.1).abs() < 1e-14);
        }
    }

    #[test]
    fn origin_curvature_semicircle() {
        // u0 = sqrt(x(1-x)) is the circle of radius 1/2: curvature 2.
        let p = semicircle();
        let k = p.curvature_at_origin(8).unwrap();
        assert!((k - 2.0).abs() < 0.04, "kappa(O) = {k}");
    }

    #[test]
    fn origin_curvature_unit_circle() {
        // u0 = sqrt(2x - x^2) is the unit circle through the origin.
        let p = sampled_profile(0.0, 2.0, 2001, |x| (2.0 * x - x * x).max(0.0).sqrt()).unwrap();
        let k = p.curvature_at_origin(8).unwrap();
        assert!((k - 1.0).abs() < 0.02, "kappa(O) = {k}");
    }

    #[test]
    fn origin_curvature_dumbbell_matches_refined_oracle() {
        // Oracle: for u^2 = x(1-x) g(x)^2 the osculating center is
        // c(x) = (x^2 + u^2)/(2x); refine x -> 0 until converged.
        let g = |x: f64| 0.5 + 0.4 * (2.0 * std::f64::consts::PI * x).cos();
        let u = |x: f64| (x * (1.0 - x)).sqrt() * g(x);
        let c_at = |x: f64| (x * x + u(x) * u(x)) / (2.0 * x);
        let mut x = 1e-2;
        let mut prev = 1.0 / c_at(x);
        let oracle = loop {
            x *= 0.25;
            let k = 1.0 / c_at(x);
            if (k - prev).abs() < 1e-7 {
                break k;
            }
            prev = k;
            assert!(x > 1e-14, "oracle failed to converge");
        };
        assert!((oracle - 2.0 / (0.81)).abs() < 1e-4, "oracle {oracle}");

        let p = make_initial_curve_sampled(
            &CurveFamily::Dumbbell {
                b0: 1.0,
                base: 0.5,
                amp: 0.4,
                freq: 2.0,
            },
            100_001,
        )
        .unwrap();
        let k = p.curvature_at_origin(8).unwrap();
        assert!(
            (k - oracle).abs() < 0.02 * oracle,
            "fit {k} vs oracle {oracle}"
        );
    }

    #[test]
    fn alpha_domain_semicircle() {
        let p = semicircle();
        assert!(check_alpha_domain(&p, 0.4).is_alpha_domain);
    }

    #[test]
    fn alpha_domain_monotone_in_alpha() {
        let p = make_initial_curve(&CurveFamily::Dumbbell {
            b0: 1.0,
            base: 0.5,
            amp: 0.4,
            freq: 2.0,
        })
        .unwrap();
        let alphas = [0.01, 0.02, 0.03, 0.04, 0.049];
        let mut was_false = false;
        for a in alphas {
            let ok = check_alpha_domain(&p, a).is_alpha_domain;
            if was_false {
                assert!(!ok, "alpha-domain property must be monotone in alpha");
            }
            was_false = was_false || !ok;
        }
    }

    #[test]
    fn alpha_domain_dumbbell_neck() {
        // Dense-sample oracle: neck height 0.1 at x = 0.5 for this variant.
        let p = make_initial_curve(&CurveFamily::Dumbbell {
            b0: 1.0,
            base: 0.55,
            amp: 0.35,
            freq: 2.0,
        })
        .unwrap();
        assert!((p.eval(0.5) - 0.1).abs() < 1e-9);
        assert!(check_alpha_domain(&p, 0.05).is_alpha_domain);
        let bad = check_alpha_domain(&p, 0.2);
        assert!(!bad.is_alpha_domain);
        let (rho, count) = bad.witness.unwrap();
        // Oracle: count crossings of u = rho on a dense grid.
        let dense_count = {
            let mut c = 0;
            let n = 200_000;
            let u = |x: f64| {
                (x * (1.0 - x)).max(0.0).sqrt()
                    * (0.55 + 0.35 * (2.0 * std::f64::consts::PI * x).cos())
            };
            let mut prev = u(0.0) - rho;
            for i in 1..=n {
                let x = i as f64 / n as f64;
                let d = u(x) - rho;
                if prev * d < 0.0 {
                    c += 1;
                }
                if d != 0.0 {
                    prev = d;
                }
            }
            c
        };
        assert_eq!(count, dense_count);
        assert_eq!(count, 4, "witness level {rho} should cross 4 times");
    }

    #[test]
    fn alpha_domain_rejects_flat_zero() {
        let p = Profile::new(
            vec![(0.0, 0.0), (0.5, 0.0), (1.0, 0.0)],
            Contact::Vertical,
            Contact::Vertical,
        )
        .unwrap();
        assert!(!check_alpha_domain(&p, 0.1).is_alpha_domain);
    }

    #[test]
    fn closed_curve_from_circle_profile() {
        let p = make_initial_curve(&CurveFamily::Circle { r: 0.5, cx: 1.0 }).unwrap();
        let c = p.to_closed_curve().unwrap();
        assert!(c.closed);
        assert!((c.area() - std::f64::consts::PI * 0.25).abs() < 1e-3);
        assert!(!c.self_intersects());
    }
}
