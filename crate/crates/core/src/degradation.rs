//! Homogeneous gamma degradation observed at inspection epochs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampling::GammaSampler;
use crate::special::regularized_gamma;

/// Shape coefficient per unit time, rate β and inspection interval Δt.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaProcessParams {
    pub v_coeff: f64,
    pub beta: f64,
    pub delta_t: f64,
}

impl GammaProcessParams {
    pub fn new(v_coeff: f64, beta: f64, delta_t: f64) -> Result<Self> {
        let p = Self { v_coeff, beta, delta_t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("v_coeff", self.v_coeff), ("beta", self.beta), ("delta_t", self.delta_t)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Gamma shape of one inter-inspection increment, `v_coeff · Δt`.
    pub fn increment_shape(&self) -> f64 {
        self.v_coeff * self.delta_t
    }

    pub fn increment_mean(&self) -> f64 {
        self.increment_shape() / self.beta
    }

    pub fn increment_variance(&self) -> f64 {
        self.increment_shape() / (self.beta * self.beta)
    }

    pub fn sampler(&self) -> Result<IncrementSampler> {
        self.validate()?;
        Ok(IncrementSampler(GammaSampler::new(self.increment_shape(), self.beta)?))
    }

    pub fn sample_increment(&self, rng: &mut RngStream) -> Result<f64> {
        Ok(self.sampler()?.sample(rng))
    }

    /// P(ΔX ≤ x) = γ(v, βx) / Γ(v).
    pub fn increment_cdf(&self, x: f64) -> Result<f64> {
        Ok(self.tails(x)?.0)
    }

    /// P(ΔX > x) = Γ(v, βx) / Γ(v).
    pub fn increment_survival(&self, x: f64) -> Result<f64> {
        Ok(self.tails(x)?.1)
    }

    pub fn increment_pdf(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        let v = self.increment_shape();
        if x == 0.0 {
            return Ok(if v < 1.0 { f64::INFINITY } else if v == 1.0 { self.beta } else { 0.0 });
        }
        let ln = v * self.beta.ln() + (v - 1.0) * x.ln() - self.beta * x - crate::special::ln_gamma(v);
        Ok(ln.exp())
    }

    fn tails(&self, x: f64) -> Result<(f64, f64)> {
        self.check_x(x)?;
        self.validate()?;
        Ok(regularized_gamma(self.increment_shape(), self.beta * x))
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if x < 0.0 || x.is_nan() {
            return Err(Error::param(format!("deterioration increment must be non-negative, got {x}")));
        }
        Ok(())
    }
}

/// Pre-validated increment sampler for a fixed parameter set.
#[derive(Clone, Copy, Debug)]
pub struct IncrementSampler(GammaSampler);

impl IncrementSampler {
    #[inline]
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.0.sample(rng)
    }
}

/// Deterioration levels at `steps` successive inspections without maintenance.
pub fn unmaintained_path(p: &GammaProcessParams, steps: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    let sampler = p.sampler()?;
    let mut x = 0.0;
    Ok((0..steps)
        .map(|_| {
            x += sampler.sample(rng);
            x
        })
        .collect())
}
