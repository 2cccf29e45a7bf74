use std::ops::{Add, Mul, Neg, Sub};

/// Point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product, viewing both as 3-vectors in the plane.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }

    /// Rotation by +90 degrees (counterclockwise).
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Mirror across the y-axis.
    pub fn mirror_x(self) -> Self {
        Self::new(-self.x, self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Classification of how two segments meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentMeet {
    Disjoint,
    /// Transversal crossing in the strict interior of both segments.
    Crossing(Point2),
    /// Touching at an endpoint, a collinear overlap, or a grazing contact.
    Touching(Point2),
}

/// Intersection test for segments `[a1,a2]` and `[b1,b2]`.
///
/// Only strict interior crossings count as `Crossing`; endpoint contacts and
/// collinear overlaps are reported as `Touching` so callers can treat them as
/// tangential events rather than transversal intersections.
pub fn segment_intersection(a1: Point2, a2: Point2, b1: Point2, b2: Point2) -> SegmentMeet {
    let r = a2 - a1;
    let s = b2 - b1;
    let denom = r.cross(s);
    let qp = b1 - a1;
    if denom == 0.0 {
        // Parallel. Overlap or touch only if collinear.
        if qp.cross(r) != 0.0 {
            return SegmentMeet::Disjoint;
        }
        let rr = r.norm_sq();
        if rr == 0.0 {
            return SegmentMeet::Disjoint;
        }
        let t0 = qp.dot(r) / rr;
        let t1 = (b2 - a1).dot(r) / rr;
        let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
        if hi < 0.0 || lo > 1.0 {
            return SegmentMeet::Disjoint;
        }
        let tm = 0.5 * (lo.max(0.0) + hi.min(1.0));
        return SegmentMeet::Touching(a1 + r * tm);
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    if t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0 {
        return SegmentMeet::Disjoint;
    }
    let p = a1 + r * t;
    let strict = t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0;
    if strict {
        SegmentMeet::Crossing(p)
    } else {
        SegmentMeet::Touching(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_projects() {
        let d = point_segment_distance(
            Point2::new(0.5, 1.0),
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
        );
        assert!((d - 1.0).abs() < 1e-15);
        let d = point_segment_distance(
            Point2::new(2.0, 0.0),
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
        );
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn crossing_vs_touching() {
        let m = segment_intersection(
            Point2::new(-1.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, -1.0),
            Point2::new(0.0, 1.0),
        );
        assert!(matches!(m, SegmentMeet::Crossing(_)));

        // Meets exactly at an endpoint of the second segment.
        let m = segment_intersection(
            Point2::new(-1.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 1.0),
        );
        assert!(matches!(m, SegmentMeet::Touching(_)));

        let m = segment_intersection(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 0.0),
            Point2::new(2.0, 0.0),
        );
        assert!(matches!(m, SegmentMeet::Touching(_)));
    }
}
