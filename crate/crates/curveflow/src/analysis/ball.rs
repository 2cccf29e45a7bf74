//! Radius ODE for a ball moving by V = -kappa + A:
//!
//!   R'(t) = A - 1/R(t)
//!
//! The unique comparison object for everything else in the crate. For A = 0
//! the solution is R(t) = sqrt(R0^2 - 2t) with extinction at R0^2/2; for
//! A > 0 and A R0 < 1 the extinction time has the closed form
//! -R0/A - ln(1 - A R0)/A^2, obtained by integrating dt = R dR / (A R - 1).

use crate::error::{Error, Result};

/// Ball evolving by the radius ODE.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BallState {
    pub a: f64,
    pub r0: f64,
}

/// Fixed RK4 step used by the forward integrator.
const RK4_DT: f64 = 1e-4;

impl BallState {
    pub fn new(a: f64, r0: f64) -> Result<Self> {
        if r0 <= 0.0 {
            return Err(Error::InvalidInput(format!("ball radius must be positive, got {r0}")));
        }
        if a < 0.0 {
            return Err(Error::InvalidInput(format!("driving force must be >= 0, got {a}")));
        }
        Ok(Self { a, r0 })
    }

    /// Closed-form extinction time, `None` when the ball never vanishes
    /// (A R0 >= 1).
    pub fn extinction_time(&self) -> Option<f64> {
        if self.a == 0.0 {
            return Some(0.5 * self.r0 * self.r0);
        }
        if self.a * self.r0 >= 1.0 {
            return None;
        }
        Some(-self.r0 / self.a - (1.0 - self.a * self.r0).ln() / (self.a * self.a))
    }

    /// Extinction time by RK4 on dt/dR = R/(AR - 1), integrated from R0 down
    /// to 0. Exists only when the closed form does; the pair cross-checks the
    /// quadrature against the formula.
    pub fn extinction_time_rk4(&self, steps: usize) -> Option<f64> {
        if self.a * self.r0 >= 1.0 && self.a > 0.0 {
            return None;
        }
        let f = |r: f64| r / (self.a * r - 1.0);
        let h = -self.r0 / steps as f64;
        let mut t = 0.0;
        let mut r = self.r0;
        for _ in 0..steps {
            let k1 = f(r);
            let k2 = f(r + 0.5 * h);
            let k3 = f(r + 0.5 * h);
            let k4 = f(r + h);
            t += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            r += h;
        }
        Some(t)
    }

    /// Radius at time t by RK4 with fixed step, erroring past extinction.
    pub fn radius_at(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::InvalidInput("negative time".into()));
        }
        if let Some(ext) = self.extinction_time() {
            if t >= ext {
                return Err(Error::BeyondExtinction(t, ext));
            }
        }
        let f = |r: f64| self.a - 1.0 / r;
        let n = (t / RK4_DT).ceil().max(1.0) as usize;
        let h = t / n as f64;
        let mut r = self.r0;
        for _ in 0..n {
            let k1 = f(r);
            let k2 = f(r + 0.5 * h * k1);
            let k3 = f(r + 0.5 * h * k2);
            let k4 = f(r + h * k3);
            r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if !(r > 0.0) {
                return Err(Error::BeyondExtinction(t, self.extinction_time().unwrap_or(t)));
            }
        }
        Ok(r)
    }
}

/// Radius of the ball with initial radius `r0` under driving force `a`, at
/// time `t`.
pub fn ball_radius(a: f64, r0: f64, t: f64) -> Result<f64> {
    BallState::new(a, r0)?.radius_at(t)
}

/// Closed-form extinction time (`None` when the ball survives forever).
pub fn extinction_time(a: f64, r0: f64) -> Result<Option<f64>> {
    Ok(BallState::new(a, r0)?.extinction_time())
}
