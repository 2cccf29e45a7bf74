//! Marching-squares extraction of the zero contour with linear interpolation.
//!
//! Segments are oriented with the inside ({phi >= 0}) on their left, so outer
//! contours come out counterclockwise and holes clockwise; summing signed
//! areas over all contours gives the enclosed area directly. The saddle
//! ambiguity is resolved by the sign of the cell-center average, which keeps
//! the output deterministic.

use crate::error::Result;
use crate::geometry::point::Point2;
use crate::geometry::polyline::PolyCurve;
use crate::levelset::field::ScalarField2D;
use std::collections::HashMap;

/// Grid-edge identifier: horizontal edge (i,j)-(i+1,j) or vertical edge
/// (i,j)-(i,j+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeId {
    H(usize, usize),
    V(usize, usize),
}

struct Segment {
    from: EdgeId,
    to: EdgeId,
    p_from: Point2,
    p_to: Point2,
}

#[inline]
fn inside(v: f64) -> bool {
    v >= 0.0
}

/// Extracts the zero contours, largest enclosed area first. Contours hitting
/// the grid boundary come back as open polylines.
pub fn extract_zero_contour(field: &ScalarField2D) -> Result<Vec<PolyCurve>> {
    let g = field.grid;
    let mut segments: Vec<Segment> = Vec::new();

    for j in 0..g.ny - 1 {
        for i in 0..g.nx - 1 {
            let v00 = field.get(i, j);
            let v10 = field.get(i + 1, j);
            let v01 = field.get(i, j + 1);
            let v11 = field.get(i + 1, j + 1);
            let b00 = inside(v00);
            let b10 = inside(v10);
            let b01 = inside(v01);
            let b11 = inside(v11);
            if b00 == b10 && b10 == b01 && b01 == b11 {
                continue;
            }
            let p00 = g.point(i, j);
            let p10 = g.point(i + 1, j);
            let p01 = g.point(i, j + 1);
            let p11 = g.point(i + 1, j + 1);
            let lerp = |pa: Point2, pb: Point2, a: f64, b: f64| {
                let t = a / (a - b);
                pa + (pb - pa) * t
            };
            // Crossing point on each cut edge.
            let bottom = (b00 != b10).then(|| lerp(p00, p10, v00, v10));
            let right = (b10 != b11).then(|| lerp(p10, p11, v10, v11));
            let top = (b01 != b11).then(|| lerp(p01, p11, v01, v11));
            let left = (b00 != b01).then(|| lerp(p00, p01, v00, v01));
            let e_bottom = EdgeId::H(i, j);
            let e_right = EdgeId::V(i + 1, j);
            let e_top = EdgeId::H(i, j + 1);
            let e_left = EdgeId::V(i, j);

            // Directed segment with inside on the left: from the edge where
            // the boundary (walked so the cell interior is to the left of
            // nothing in particular) -- direction is fixed by corner signs.
            let mut emit = |ea: EdgeId, pa: Point2, eb: EdgeId, pb: Point2| {
                segments.push(Segment {
                    from: ea,
                    to: eb,
                    p_from: pa,
                    p_to: pb,
                });
            };

            // Enumerate the 14 non-trivial sign patterns. Orientation rule:
            // walking from `from` to `to`, the inside corners lie on the left
            // (checked case by case with the cross product of the segment
            // direction against each inside corner).
            match (b00, b10, b11, b01) {
                // Single inside corner.
                (true, false, false, false) => emit(e_bottom, bottom.unwrap(), e_left, left.unwrap()),
                (false, true, false, false) => emit(e_right, right.unwrap(), e_bottom, bottom.unwrap()),
                (false, false, true, false) => emit(e_top, top.unwrap(), e_right, right.unwrap()),
                (false, false, false, true) => emit(e_left, left.unwrap(), e_top, top.unwrap()),
                // Single outside corner.
                (false, true, true, true) => emit(e_left, left.unwrap(), e_bottom, bottom.unwrap()),
                (true, false, true, true) => emit(e_bottom, bottom.unwrap(), e_right, right.unwrap()),
                (true, true, false, true) => emit(e_right, right.unwrap(), e_top, top.unwrap()),
                (true, true, true, false) => emit(e_top, top.unwrap(), e_left, left.unwrap()),
                // Half-and-half.
                (true, true, false, false) => emit(e_right, right.unwrap(), e_left, left.unwrap()),
                (false, false, true, true) => emit(e_left, left.unwrap(), e_right, right.unwrap()),
                (true, false, false, true) => emit(e_bottom, bottom.unwrap(), e_top, top.unwrap()),
                (false, true, true, false) => emit(e_top, top.unwrap(), e_bottom, bottom.unwrap()),
                // Saddles: resolved by the cell-center sign.
                (true, false, true, false) => {
                    let center_inside = inside(0.25 * (v00 + v10 + v01 + v11));
                    if center_inside {
                        // Inside corners connect through the center; the two
                        // segments separate off the outside corners B and D.
                        emit(e_bottom, bottom.unwrap(), e_right, right.unwrap());
                        emit(e_top, top.unwrap(), e_left, left.unwrap());
                    } else {
                        emit(e_bottom, bottom.unwrap(), e_left, left.unwrap());
                        emit(e_top, top.unwrap(), e_right, right.unwrap());
                    }
                }
                (false, true, false, true) => {
                    let center_inside = inside(0.25 * (v00 + v10 + v01 + v11));
                    if center_inside {
                        emit(e_left, left.unwrap(), e_bottom, bottom.unwrap());
                        emit(e_right, right.unwrap(), e_top, top.unwrap());
                    } else {
                        emit(e_right, right.unwrap(), e_bottom, bottom.unwrap());
                        emit(e_left, left.unwrap(), e_top, top.unwrap());
                    }
                }
                _ => unreachable!("uniform cells were skipped"),
            }
        }
    }

    chain_segments(segments)
}

fn chain_segments(segments: Vec<Segment>) -> Result<Vec<PolyCurve>> {
    let mut by_start: HashMap<EdgeId, usize> = HashMap::with_capacity(segments.len());
    for (k, s) in segments.iter().enumerate() {
        by_start.insert(s.from, k);
    }
    let mut used = vec![false; segments.len()];
    let mut curves = Vec::new();

    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        // Walk backward first so open chains start at their true beginning.
        let mut first = start;
        loop {
            let from_edge = segments[first].from;
            let pred = segments
                .iter()
                .enumerate()
                .position(|(k, s)| !used[k] && s.to == from_edge && k != first);
            // Linear scan is fine: predecessors are only needed for open
            // chains, which touch the boundary and are rare.
            match pred {
                Some(p) if p != start => first = p,
                _ => break,
            }
            if first == start {
                break;
            }
        }
        let mut pts: Vec<Point2> = Vec::new();
        let mut cur = first;
        let mut closed = false;
        loop {
            used[cur] = true;
            if pts.is_empty() {
                pts.push(segments[cur].p_from);
            }
            pts.push(segments[cur].p_to);
            match by_start.get(&segments[cur].to) {
                Some(&next) if next == first => {
                    closed = true;
                    break;
                }
                Some(&next) if !used[next] => cur = next,
                _ => break,
            }
        }
        if closed {
            // Last point coincides with the first crossing.
            if pts.len() > 1 && pts[0].dist(*pts.last().unwrap()) < 1e-12 {
                pts.pop();
            }
        }
        pts.dedup_by(|a, b| a == b);
        if (closed && pts.len() >= 3) || (!closed && pts.len() >= 2) {
            if let Ok(c) = PolyCurve::new(pts, closed) {
                curves.push(c);
            }
        }
    }

    curves.sort_by(|a, b| b.signed_area().abs().total_cmp(&a.signed_area().abs()));
    Ok(curves)
}

/// Enclosed area of {phi >= 0} from the signed contour areas (holes count
/// negative thanks to the inside-on-left orientation).
pub fn enclosed_area(contours: &[PolyCurve]) -> f64 {
    contours
        .iter()
        .filter(|c| c.closed)
        .map(|c| c.signed_area())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelset::field::signed_distance_init;
    use crate::levelset::grid::GridSpec;

    #[test]
    fn circle_contour_is_accurate() {
        let g = GridSpec::square(-2.0, 2.0, -2.0, 2.0, 256).unwrap();
        let curve = PolyCurve::circle(Point2::new(0.0, 0.0), 1.0, 1024);
        let f = signed_distance_init(&curve, &g).unwrap();
        let contours = extract_zero_contour(&f).unwrap();
        assert_eq!(contours.len(), 1);
        let d = crate::geometry::polyline::hausdorff_distance(&contours[0], &curve).unwrap();
        assert!(d <= g.dx(), "hausdorff {d} vs dx {}", g.dx());
        // Inside-on-left means the outer contour is counterclockwise.
        assert!(contours[0].signed_area() > 0.0);
    }

    #[test]
    fn positive_field_has_no_contour() {
        let g = GridSpec::square(0.0, 1.0, 0.0, 1.0, 32).unwrap();
        let f = ScalarField2D::constant(g, 1.0);
        assert!(extract_zero_contour(&f).unwrap().is_empty());
    }

    #[test]
    fn two_disjoint_circles_areas() {
        let g = GridSpec::square(-3.0, 3.0, -3.0, 3.0, 384).unwrap();
        let f = ScalarField2D::from_fn(g, |p| {
            let d1 = 0.8 - p.dist(Point2::new(-1.5, 0.0));
            let d2 = 0.5 - p.dist(Point2::new(1.5, 0.0));
            d1.max(d2).clamp(-1.0, 1.0)
        });
        let contours = extract_zero_contour(&f).unwrap();
        assert_eq!(contours.len(), 2);
        let a0 = contours[0].area();
        let a1 = contours[1].area();
        let pi = std::f64::consts::PI;
        assert!((a0 - pi * 0.64).abs() < 0.02 * pi * 0.64, "big {a0}");
        assert!((a1 - pi * 0.25).abs() < 0.02 * pi * 0.25, "small {a1}");
    }

    #[test]
    fn annulus_hole_is_clockwise() {
        let g = GridSpec::square(-2.0, 2.0, -2.0, 2.0, 200).unwrap();
        let f = ScalarField2D::from_fn(g, |p| {
            let r = p.norm();
            (0.4 - (r - 1.0).abs()).clamp(-1.0, 1.0)
        });
        let contours = extract_zero_contour(&f).unwrap();
        assert_eq!(contours.len(), 2);
        assert!(contours[0].signed_area() > 0.0);
        assert!(contours[1].signed_area() < 0.0);
        let area = enclosed_area(&contours);
        let exact = std::f64::consts::PI * (1.4f64.powi(2) - 0.6f64.powi(2));
        assert!((area - exact).abs() < 0.02 * exact, "annulus area {area}");
    }
}
