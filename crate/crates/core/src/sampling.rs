//! Gamma and truncated-normal variates plus standard normal helpers.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::special::erfc;

/// Marsaglia–Tsang squeeze sampler for Gamma(shape, rate), with the
/// `U^(1/shape)` boost for shape < 1.
#[derive(Clone, Copy, Debug)]
pub struct GammaSampler {
    shape: f64,
    rate: f64,
    d: f64,
    c: f64,
}

impl GammaSampler {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::param(format!("gamma shape must be positive, got {shape}")));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::param(format!("gamma rate must be positive, got {rate}")));
        }
        let d = if shape < 1.0 { shape + 1.0 } else { shape } - 1.0 / 3.0;
        Ok(Self { shape, rate, d, c: 1.0 / (9.0 * d).sqrt() })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        loop {
            let (x, v) = loop {
                let x: f64 = StandardNormal.sample(rng);
                let v = 1.0 + self.c * x;
                if v > 0.0 {
                    break (x, v * v * v);
                }
            };
            let u = rng.uniform_open();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + self.d * (1.0 - v + v.ln()) {
                let mut g = self.d * v;
                if self.shape < 1.0 {
                    g *= rng.uniform_open().powf(1.0 / self.shape);
                }
                return g / self.rate;
            }
        }
    }
}

pub fn sample_gamma(shape: f64, rate: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(GammaSampler::new(shape, rate)?.sample(rng))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncNormalParams {
    pub mu: f64,
    pub sigma: f64,
    pub lower: f64,
    pub upper: f64,
}

impl TruncNormalParams {
    pub fn new(mu: f64, sigma: f64, lower: f64, upper: f64) -> Result<Self> {
        let p = Self { mu, sigma, lower, upper };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.mu, self.sigma, self.lower, self.upper].iter().all(|v| v.is_finite()) {
            return Err(Error::param("truncated normal parameters must be finite"));
        }
        if self.lower > self.upper {
            return Err(Error::param(format!(
                "truncation bounds out of order: lower {} > upper {}",
                self.lower, self.upper
            )));
        }
        if self.lower < self.upper && self.sigma <= 0.0 {
            return Err(Error::param(format!("sigma must be positive, got {}", self.sigma)));
        }
        Ok(())
    }

    /// Density of the truncated law at `x` (zero outside the bounds).
    pub fn density(&self, x: f64) -> f64 {
        if x < self.lower || x > self.upper || self.lower == self.upper {
            return 0.0;
        }
        let a = (self.lower - self.mu) / self.sigma;
        let b = (self.upper - self.mu) / self.sigma;
        std_normal_pdf((x - self.mu) / self.sigma) / (self.sigma * (std_normal_cdf(b) - std_normal_cdf(a)))
    }
}

/// Inverse-CDF draw from the truncated normal. Intervals lying entirely above
/// the mean are reflected so the uniform is taken from the lower tail, where
/// Φ keeps full relative precision.
pub fn sample_trunc_normal(p: &TruncNormalParams, rng: &mut RngStream) -> Result<f64> {
    p.validate()?;
    if p.lower == p.upper {
        return Ok(p.lower);
    }
    let (a, b, sign) = {
        let a = (p.lower - p.mu) / p.sigma;
        let b = (p.upper - p.mu) / p.sigma;
        if a > 0.0 {
            (-b, -a, -1.0)
        } else {
            (a, b, 1.0)
        }
    };
    let fa = std_normal_cdf(a);
    let fb = std_normal_cdf(b);
    let u = fa + rng.uniform() * (fb - fa);
    let z = if u <= 0.0 || u >= 1.0 {
        if u <= 0.0 { a } else { b }
    } else {
        std_normal_quantile(u)?
    };
    let x = p.mu + sign * p.sigma * z;
    Ok(x.clamp(p.lower, p.upper))
}

pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Φ⁻¹(p) by Acklam's rational approximation followed by one Newton step.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param(format!("quantile requires p in (0, 1), got {p}")));
    }
    if p > 0.5 {
        return Ok(-lower_quantile(1.0 - p));
    }
    Ok(lower_quantile(p))
}

fn lower_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    let pdf = std_normal_pdf(x);
    if pdf > 0.0 {
        x - (std_normal_cdf(x) - p) / pdf
    } else {
        x
    }
}
