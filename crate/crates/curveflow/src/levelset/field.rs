use crate::error::{Error, Result};
use crate::geometry::point::Point2;
use crate::geometry::polyline::PolyCurve;
use crate::levelset::grid::GridSpec;
use std::io::Write;
use std::path::Path;

/// Truncation scale for the initial signed distance; fields stay within
/// [-CLAMP_SCALE, CLAMP_SCALE].
pub const CLAMP_SCALE: f64 = 1.0;

/// Sampled level-set function on a uniform grid. Positive inside.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub time: f64,
}

impl ScalarField2D {
    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self {
            values: vec![value; grid.len()],
            grid,
            time: 0.0,
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(Point2) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                values.push(f(grid.point(i, j)));
            }
        }
        Self {
            grid,
            values,
            time: 0.0,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn clamp_in_place(&mut self) {
        for v in &mut self.values {
            *v = v.clamp(-CLAMP_SCALE, CLAMP_SCALE);
        }
    }

    /// Pointwise max (used for unions of initial sets).
    pub fn max_with(&self, other: &ScalarField2D) -> ScalarField2D {
        assert_eq!(self.grid, other.grid);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.max(*b))
            .collect();
        ScalarField2D {
            grid: self.grid,
            values,
            time: self.time,
        }
    }

    /// Dumps the field as CSV rows `i,j,phi`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "i,j,phi")?;
        for j in 0..self.grid.ny {
            for i in 0..self.grid.nx {
                writeln!(f, "{},{},{}", i, j, self.get(i, j))?;
            }
        }
        Ok(())
    }
}

/// Unclamped signed distance to a closed curve, positive inside.
pub fn signed_distance_raw(curve: &PolyCurve, grid: &GridSpec) -> Result<ScalarField2D> {
    if !curve.closed {
        return Err(Error::Geometry("signed distance needs a closed curve".into()));
    }
    let (lo, hi) = curve.bounding_box();
    let margin_x = 0.1 * (hi.x - lo.x);
    let margin_y = 0.1 * (hi.y - lo.y);
    if lo.x - grid.x_min < margin_x
        || grid.x_max - hi.x < margin_x
        || lo.y - grid.y_min < margin_y
        || grid.y_max - hi.y < margin_y
    {
        return Err(Error::Grid(format!(
            "grid [{},{}]x[{},{}] does not cover the curve bbox [{},{}]x[{},{}] with a 10% margin",
            grid.x_min, grid.x_max, grid.y_min, grid.y_max, lo.x, hi.x, lo.y, hi.y
        )));
    }
    let field = ScalarField2D::from_fn(*grid, |p| {
        let d = curve.distance_to_point(p);
        if curve.winding_number(p) != 0 {
            d
        } else {
            -d
        }
    });
    Ok(field)
}

/// Clamped signed-distance initialization: phi = clamp(sd, -1, 1), positive
/// inside the curve.
pub fn signed_distance_init(curve: &PolyCurve, grid: &GridSpec) -> Result<ScalarField2D> {
    let mut f = signed_distance_raw(curve, grid)?;
    f.clamp_in_place();
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_circle_distances() {
        let grid = GridSpec::square(-2.0, 2.0, -2.0, 2.0, 257).unwrap();
        let curve = PolyCurve::circle(Point2::new(0.0, 0.0), 1.0, 512);
        let f = signed_distance_init(&curve, &grid).unwrap();
        let dx = grid.dx();
        // Center: distance 1, clamped at 1.
        let center = f.get(128, 128);
        assert!((center - 1.0).abs() < 2.0 * dx, "center {center}");
        // On the curve: ~0.
        let i = (128.0 + 1.0 / dx).round() as usize;
        assert!(f.get(i, 128).abs() < dx, "on-curve {}", f.get(i, 128));
        // Point (2, 0) is distance 1 outside: clamped to -1... value -1 + O(dx).
        let edge = f.get(256, 128);
        assert!((edge + 1.0).abs() < 2.0 * dx, "outside {edge}");
    }

    #[test]
    fn grid_must_cover_with_margin() {
        let grid = GridSpec::square(-1.0, 1.0, -1.0, 1.0, 64).unwrap();
        let curve = PolyCurve::circle(Point2::new(0.0, 0.0), 0.99, 128);
        assert!(signed_distance_init(&curve, &grid).is_err());
    }
}
