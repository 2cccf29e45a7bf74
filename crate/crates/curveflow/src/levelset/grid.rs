use crate::error::{Error, Result};
use crate::geometry::point::Point2;

/// Uniform grid over a rectangle; nodes at the corners, spacing dx = dy.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(x_min < x_max && y_min < y_max) {
            return Err(Error::Grid(format!(
                "degenerate extent [{x_min},{x_max}]x[{y_min},{y_max}]"
            )));
        }
        if nx < 8 || ny < 8 {
            return Err(Error::Grid(format!("grid too small: {nx}x{ny}")));
        }
        let g = Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        };
        let (dx, dy) = (g.dx(), g.dy_raw());
        if ((dx - dy) / dx).abs() > 1e-9 {
            return Err(Error::Grid(format!(
                "spacing must be uniform: dx = {dx}, dy = {dy}"
            )));
        }
        Ok(g)
    }

    /// Square grid centered on a box with n nodes per side.
    pub fn square(x_min: f64, x_max: f64, y_min: f64, y_max: f64, n: usize) -> Result<Self> {
        // Force dx = dy by stretching the shorter side.
        let dx = (x_max - x_min).max(y_max - y_min) / (n - 1) as f64;
        let cx = 0.5 * (x_min + x_max);
        let cy = 0.5 * (y_min + y_max);
        let half = 0.5 * dx * (n - 1) as f64;
        Self::new(cx - half, cx + half, cy - half, cy + half, n, n)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    fn dy_raw(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> Point2 {
        Point2::new(
            self.x_min + i as f64 * self.dx(),
            self.y_min + j as f64 * self.dx(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonuniform_spacing() {
        assert!(GridSpec::new(0.0, 1.0, 0.0, 2.0, 64, 64).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 2.0, 65, 129).is_ok());
    }

    #[test]
    fn square_helper_is_uniform() {
        let g = GridSpec::square(-1.0, 1.0, -0.6, 0.6, 256).unwrap();
        assert_eq!(g.nx, 256);
        assert!((g.dx() - (g.y_max - g.y_min) / 255.0).abs() < 1e-12);
    }
}
