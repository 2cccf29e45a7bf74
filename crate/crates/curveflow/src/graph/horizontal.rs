use crate::error::{Error, Result};
use crate::geometry::profile::Profile;

/// Graph r = u(x, t) rotated about the x-axis in R^(n+1); n = 1 is the planar
/// curve case. Holds raw (x, u) samples on a uniform grid so Dirichlet
/// experiments with nonzero boundary heights are representable; the
/// zero-endpoint Profile invariant belongs to the free-boundary problem.
#[derive(Debug, Clone)]
pub struct GraphState {
    pub samples: Vec<(f64, f64)>,
    pub n: u32,
    pub time: f64,
}

impl GraphState {
    pub fn new(samples: Vec<(f64, f64)>, n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput("dimension parameter n must be >= 1".into()));
        }
        if samples.len() < 5 {
            return Err(Error::InvalidInput("need at least 5 samples".into()));
        }
        let h = (samples.last().unwrap().0 - samples[0].0) / (samples.len() - 1) as f64;
        for (i, w) in samples.windows(2).enumerate() {
            let step = w[1].0 - w[0].0;
            if step <= 0.0 || ((step - h) / h).abs() > 1e-6 {
                return Err(Error::InvalidInput(format!(
                    "samples must sit on a uniform grid (segment {i}: {step} vs {h})"
                )));
            }
        }
        Ok(Self {
            samples,
            n,
            time: 0.0,
        })
    }

    pub fn from_profile(p: &Profile, n: u32) -> Result<Self> {
        Self::new(p.samples.clone(), n)
    }

    pub fn grid_spacing(&self) -> f64 {
        let s = &self.samples;
        (s.last().unwrap().0 - s[0].0) / (s.len() - 1) as f64
    }

    pub fn cfl_dt(&self) -> f64 {
        let h = self.grid_spacing();
        0.4 * h * h / 2.0
    }
}

/// Interior time derivative of the horizontal graph equation
/// u_t = u_xx/(1+u_x^2) - (n-1)/u + A sqrt(1+u_x^2)
/// by central differences on a uniform grid. Endpoints get NaN.
pub fn horizontal_rate(samples: &[(f64, f64)], n: u32, a: f64) -> Vec<f64> {
    let m = samples.len();
    let mut rate = vec![f64::NAN; m];
    for i in 1..m - 1 {
        let (x0, um) = samples[i - 1];
        let (_, uc) = samples[i];
        let (x1, up) = samples[i + 1];
        let h = 0.5 * (x1 - x0);
        let ux = (up - um) / (2.0 * h);
        let uxx = (up - 2.0 * uc + um) / (h * h);
        let w2 = 1.0 + ux * ux;
        let mut r = uxx / w2 + a * w2.sqrt();
        if n > 1 {
            r -= (n - 1) as f64 / uc;
        }
        rate[i] = r;
    }
    rate
}

/// One explicit step with the endpoints pinned (Dirichlet).
///
/// An interior node driven to u <= 0 is a singularity, reported with its
/// location rather than silently clamped.
pub fn step_horizontal(state: &GraphState, a: f64, dt: f64) -> Result<GraphState> {
    let bound = state.cfl_dt();
    if dt > bound * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, bound });
    }
    let samples = &state.samples;
    if state.n > 1 && samples[1..samples.len() - 1].iter().any(|&(_, u)| u <= 0.0) {
        return Err(Error::Singularity {
            x: samples
                .iter()
                .find(|&&(_, u)| u <= 0.0)
                .map(|&(x, _)| x)
                .unwrap_or(f64::NAN),
            t: state.time,
            reason: "u must be positive for the rotational term".into(),
        });
    }
    let rate = horizontal_rate(samples, state.n, a);
    let mut next = samples.clone();
    for i in 1..samples.len() - 1 {
        next[i].1 = samples[i].1 + dt * rate[i];
        if next[i].1 <= 0.0 {
            return Err(Error::Singularity {
                x: next[i].0,
                t: state.time + dt,
                reason: "graph height reached zero at an interior node".into(),
            });
        }
    }
    Ok(GraphState {
        samples: next,
        n: state.n,
        time: state.time + dt,
    })
}
