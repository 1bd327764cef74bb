//! Quality-of-service quantities of an energy service: transmission success
//! rate, provision consistency from usage regularity, deliverable energy and
//! coordination losses.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radio link parameters of the wireless transfer model. Defaults describe a
/// ~915 MHz link (lambda = 0.33 m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TsrParams {
    pub g_t: f64,
    pub g_r: f64,
    pub l_p: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub beta: f64,
    pub theta: f64,
}

impl Default for TsrParams {
    fn default() -> Self {
        Self {
            g_t: 1.5,
            g_r: 1.5,
            l_p: 1.0,
            gamma: 0.8,
            lambda: 0.33,
            beta: 0.5,
            theta: 2.0,
        }
    }
}

impl TsrParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.g_t, self.g_r, self.l_p, self.gamma, self.lambda, self.beta, self.theta,
        ];
        let ok = all.iter().all(|v| v.is_finite())
            && self.g_t > 0.0
            && self.g_r > 0.0
            && self.l_p > 0.0
            && self.gamma > 0.0
            && self.gamma <= 1.0
            && self.lambda > 0.0
            && self.beta >= 0.0
            && self.theta >= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid tsr_params {self:?}")))
        }
    }
}

/// A transmission success rate together with the unclamped model output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tsr {
    pub value: f64,
    pub raw: f64,
}

impl Tsr {
    /// Raw model output above 1 means the link parameters are inconsistent.
    pub fn warning(&self) -> Option<String> {
        (self.raw > 1.0).then(|| {
            format!(
                "transmission model yields {:.4} > 1; clamped to 1, check tsr_params",
                self.raw
            )
        })
    }
}

pub fn compute_tsr(p: &TsrParams, distance: f64) -> Result<Tsr> {
    p.validate()?;
    if !(distance >= 0.0) || !distance.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "distance must be finite and non-negative, got {distance}"
        )));
    }
    let reach = distance + p.beta;
    if reach == 0.0 {
        return Err(Error::InvalidArgument(
            "distance + beta = 0 makes the transfer model singular".into(),
        ));
    }
    let raw = p.g_t * p.g_r * p.gamma / p.l_p * (p.lambda / (4.0 * PI * reach)).powf(p.theta);
    Ok(Tsr {
        value: raw.clamp(0.0, 1.0),
        raw,
    })
}

/// Uniformly spaced state-of-charge samples of a provider device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UsageTrace {
    samples: Vec<(f64, f64)>,
}

impl UsageTrace {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidArgument(
                "usage trace needs at least 3 samples".into(),
            ));
        }
        let step = samples[1].0 - samples[0].0;
        if !(step > 0.0) {
            return Err(Error::InvalidArgument(
                "usage trace timestamps must increase".into(),
            ));
        }
        for w in samples.windows(2) {
            let d = w[1].0 - w[0].0;
            if !(d > 0.0) || (d - step).abs() > 1e-6 * step.abs().max(1.0) {
                return Err(Error::InvalidArgument(
                    "usage trace must be uniformly spaced".into(),
                ));
            }
        }
        if samples.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidArgument("usage trace has non-finite samples".into()));
        }
        Ok(Self { samples })
    }

    /// Samples taken every `step` seconds starting at `t0`.
    pub fn from_values(t0: f64, step: f64, values: &[f64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| (t0 + step * i as f64, v))
                .collect(),
        )
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

pub const DEFAULT_APEN_M: usize = 2;
pub const DEFAULT_APEN_R: f64 = 0.2;

/// Approximate entropy ApEn(m, r * stddev) of the SoC values.
///
/// Self matches are counted, so every template has at least one match. The
/// finite-sample statistic can dip a hair below zero on very regular series;
/// it is floored at 0. A constant trace yields 0.
pub fn approximate_entropy(trace: &UsageTrace, m: usize, r: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("embedding length must be >= 1".into()));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let x: Vec<f64> = trace.values().collect();
    let n = x.len();
    if n < m + 2 {
        return Err(Error::InvalidArgument(format!(
            "trace of {n} samples is too short for m = {m}"
        )));
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
    let tolerance = r * sd;
    if tolerance == 0.0 {
        return Ok(0.0);
    }
    let phi = |len: usize| -> f64 {
        let count = n - len + 1;
        let mut total = 0.0;
        for i in 0..count {
            let matches = (0..count)
                .filter(|&j| (0..len).all(|k| (x[i + k] - x[j + k]).abs() <= tolerance))
                .count();
            total += (matches as f64 / count as f64).ln();
        }
        total / count as f64
    };
    Ok((phi(m) - phi(m + 1)).max(0.0))
}

/// Provision consistency `eub / kolent`, clamped to `[0, 1]`; a perfectly
/// regular trace (kolent = 0) keeps the full pattern factor.
pub fn provision_consistency(kolent: f64, eub: f64) -> f64 {
    if kolent > 0.0 {
        (eub / kolent).min(1.0)
    } else {
        eub
    }
}

pub fn deliverable_energy(ec: f64, tsr: f64, alpha: f64) -> f64 {
    alpha * ec * tsr
}

/// Communication overheads of establishing one transfer. The same shape
/// serves the consumer side (query loss) and the provider side.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CoordinationCosts {
    /// mAh per KB exchanged with the edge.
    pub c_cloud: f64,
    /// KB exchanged with the edge.
    pub f_cloud: f64,
    /// mAh per KB exchanged device to device.
    pub c_peer: f64,
    /// KB exchanged device to device.
    pub f_peer: f64,
}

pub fn coordination_loss(c: &CoordinationCosts) -> f64 {
    c.c_cloud * c.f_cloud + c.c_peer * c.f_peer
}
