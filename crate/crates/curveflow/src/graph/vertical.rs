use crate::error::{Error, Result};

/// Direction of the normal velocity for a vertical graph x = v(r, t):
/// rightward motion takes "+A", leftward "-A".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerticalSign {
    Plus,
    Minus,
}

impl VerticalSign {
    fn factor(self) -> f64 {
        match self {
            VerticalSign::Plus => 1.0,
            VerticalSign::Minus => -1.0,
        }
    }
}

/// Time derivative of the vertical graph equation
/// v_t = v_rr/(1+v_r^2) + ((n-1)/r) v_r +- A sqrt(1+v_r^2)
/// on a uniform grid over [0, rho].
///
/// The symmetry condition v_r(0) = 0 is imposed through a ghost node, and at
/// r = 0 the (n-1)/r term takes its limit (n-1) v_rr. The last node is left
/// to the caller (NaN).
pub fn vertical_rate(v: &[f64], dr: f64, n: u32, a: f64, sign: VerticalSign) -> Vec<f64> {
    let m = v.len();
    let s = sign.factor();
    let mut rate = vec![f64::NAN; m];
    // r = 0: ghost v[-1] = v[1].
    let vrr0 = 2.0 * (v[1] - v[0]) / (dr * dr);
    rate[0] = n as f64 * vrr0 + s * a;
    for i in 1..m - 1 {
        let r = i as f64 * dr;
        let vr = (v[i + 1] - v[i - 1]) / (2.0 * dr);
        let vrr = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dr * dr);
        let w2 = 1.0 + vr * vr;
        rate[i] = vrr / w2 + (n - 1) as f64 / r * vr + s * a * w2.sqrt();
    }
    rate
}

/// One explicit step; the outer endpoint r = rho stays pinned.
pub fn step_vertical(
    v: &[f64],
    dr: f64,
    n: u32,
    a: f64,
    sign: VerticalSign,
    dt: f64,
) -> Result<Vec<f64>> {
    if v.len() < 3 {
        return Err(Error::InvalidInput("need at least 3 radial samples".into()));
    }
    let bound = 0.4 * dr * dr / (2.0 * n as f64);
    if dt > bound * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, bound });
    }
    let rate = vertical_rate(v, dr, n, a, sign);
    let mut next = v.to_vec();
    for i in 0..v.len() - 1 {
        next[i] = v[i] + dt * rate[i];
    }
    Ok(next)
}
