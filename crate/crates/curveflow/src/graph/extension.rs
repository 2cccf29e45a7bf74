//! Extension curves: the graph of u(., t) with two rays attached below the
//! axis at the endpoints, slanted by the contact angles (vertical half-lines
//! for angle pi/2). Intersection counts between extension curves are the
//! monotone quantity audited by the analysis layer.

use crate::geometry::point::Point2;
use crate::geometry::polyline::PolyCurve;
use crate::geometry::profile::{Contact, Profile};

/// Half-line from `origin` into the lower half plane.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Ray {
    pub origin: Point2,
    /// Unit direction with dir.y < 0.
    pub dir: Point2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionCurve {
    pub left_ray: Ray,
    pub right_ray: Ray,
    /// The graph part, an open polyline in increasing x.
    pub graph: Vec<Point2>,
}

impl ExtensionCurve {
    /// Greatest slope magnitude among the two rays (infinite rays are
    /// vertical and bounded by 1 in direction components).
    pub fn max_ray_slope(&self) -> f64 {
        let slope = |r: &Ray| {
            if r.dir.x == 0.0 {
                1.0
            } else {
                (r.dir.y / r.dir.x).abs().max(1.0)
            }
        };
        slope(&self.left_ray).max(slope(&self.right_ray))
    }

    /// Rays clipped to segments of length `depth`, plus the graph segments.
    pub fn segments(&self, depth: f64) -> Vec<(Point2, Point2)> {
        let mut segs: Vec<(Point2, Point2)> = Vec::with_capacity(self.graph.len() + 1);
        segs.push((
            self.left_ray.origin,
            self.left_ray.origin + self.left_ray.dir * depth,
        ));
        for w in self.graph.windows(2) {
            segs.push((w[0], w[1]));
        }
        segs.push((
            self.right_ray.origin,
            self.right_ray.origin + self.right_ray.dir * depth,
        ));
        segs
    }

    pub fn bounding_box(&self) -> (Point2, Point2) {
        let mut lo = self.left_ray.origin;
        let mut hi = lo;
        for p in self
            .graph
            .iter()
            .chain([self.left_ray.origin, self.right_ray.origin].iter())
        {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }
}

/// Builds the extension curve of a profile from its contact data.
///
/// The left ray has slope tan(theta-) and runs down-left; the right ray has
/// slope -tan(theta+) and runs down-right; vertical contacts give vertical
/// half-lines at x = a and x = b.
pub fn extension_curve(p: &Profile) -> ExtensionCurve {
    extension_curve_of_points(
        p.samples.iter().map(|&(x, u)| Point2::new(x, u)).collect(),
        p.left_contact,
        p.right_contact,
    )
}

pub fn extension_curve_of_points(
    graph: Vec<Point2>,
    left: Contact,
    right: Contact,
) -> ExtensionCurve {
    let a = graph.first().map(|p| p.x).unwrap_or(0.0);
    let b = graph.last().map(|p| p.x).unwrap_or(0.0);
    let th_m = left.angle();
    let th_p = right.angle();
    ExtensionCurve {
        left_ray: Ray {
            origin: Point2::new(a, 0.0),
            dir: Point2::new(-th_m.cos(), -th_m.sin()),
        },
        right_ray: Ray {
            origin: Point2::new(b, 0.0),
            dir: Point2::new(th_p.cos(), -th_p.sin()),
        },
        graph,
    }
}

/// Extension curve of the upper branch of a closed rotated-graph curve with
/// vertical contacts (the tracker's regime).
pub fn extension_curve_of_closed(curve: &PolyCurve) -> crate::error::Result<ExtensionCurve> {
    let branch = crate::trace::upper_branch_points(curve)?;
    Ok(extension_curve_of_points(
        branch,
        Contact::Vertical,
        Contact::Vertical,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::profile::{make_initial_curve, CurveFamily};

    #[test]
    fn vertical_contacts_give_vertical_rays() {
        let p = make_initial_curve(&CurveFamily::Semicircle { b0: 1.0 }).unwrap();
        let e = extension_curve(&p);
        assert!((e.left_ray.dir.x).abs() < 1e-15 && e.left_ray.dir.y == -1.0);
        assert!((e.right_ray.dir.x).abs() < 1e-15 && e.right_ray.dir.y == -1.0);
        assert_eq!(e.left_ray.origin, Point2::new(0.0, 0.0));
        assert_eq!(e.right_ray.origin, Point2::new(1.0, 0.0));
    }

    #[test]
    fn quarter_angle_ray_is_diagonal() {
        // theta- = pi/4 at a = 0: the ray y = x for y < 0.
        let p = crate::graph::free_boundary::arc_cap_profile(
            1.0,
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_PI_4,
            101,
        )
        .unwrap();
        let e = extension_curve(&p);
        assert!((e.left_ray.origin.x - 0.0).abs() < 1e-12);
        let d = e.left_ray.dir;
        assert!((d.y / d.x - 1.0).abs() < 1e-12, "slope {}", d.y / d.x);
        assert!(d.x < 0.0 && d.y < 0.0);
    }

    #[test]
    fn mirror_symmetry() {
        let p = crate::graph::free_boundary::arc_cap_profile(1.0, 0.4, 0.6, 101).unwrap();
        let e = extension_curve(&p);
        // Mirror the profile about x = 0 and compare reflected rays.
        let mirrored: Vec<(f64, f64)> = p.samples.iter().rev().map(|&(x, u)| (-x, u)).collect();
        let q = Profile::new(mirrored, p.right_contact, p.left_contact).unwrap();
        let f = extension_curve(&q);
        assert!((f.right_ray.origin.x + e.left_ray.origin.x).abs() < 1e-12);
        assert!((f.right_ray.dir.x + e.left_ray.dir.x).abs() < 1e-12);
        assert!((f.right_ray.dir.y - e.left_ray.dir.y).abs() < 1e-12);
    }
}
