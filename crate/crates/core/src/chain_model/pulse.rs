use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::chain_model::config::ChainConfig;
use crate::error::{Error, Result};

/// One Gaussian control signal, `amplitude * exp(-(t - peak_time)^2 / (2 std_dev^2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPulse {
    pub amplitude: f64,
    pub peak_time: f64,
    pub std_dev: f64,
}

impl GaussianPulse {
    pub fn new(amplitude: f64, peak_time: f64, std_dev: f64) -> Self {
        Self {
            amplitude,
            peak_time,
            std_dev,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let z = (t - self.peak_time) / self.std_dev;
        self.amplitude * (-0.5 * z * z).exp()
    }
}

/// Tunneling rates for the `N - 1` links of the chain, one pulse per link.
///
/// Links are numbered from 0: link `k` couples the sites `k + 1` and `k + 2`
/// (1-based). The standard transport schedule puts the pulses in the
/// counter-intuitive order: the last link's pulse peaks before the first
/// link's, and all interior links share one broad pulse between the two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pulses: Vec<GaussianPulse>,
}

impl PulseSchedule {
    /// Build a schedule directly from per-link pulses.
    pub fn from_pulses(pulses: Vec<GaussianPulse>) -> Result<Self> {
        if pulses.len() < 2 {
            return Err(Error::Config(format!(
                "a schedule needs at least 2 links, got {}",
                pulses.len()
            )));
        }
        for (k, p) in pulses.iter().enumerate() {
            if p.amplitude < 0.0 || !p.amplitude.is_finite() {
                return Err(Error::Config(format!(
                    "link {k}: amplitude must be nonnegative and finite, got {}",
                    p.amplitude
                )));
            }
            if p.std_dev <= 0.0 || !p.std_dev.is_finite() {
                return Err(Error::Config(format!(
                    "link {k}: std_dev must be positive and finite, got {}",
                    p.std_dev
                )));
            }
            if !p.peak_time.is_finite() {
                return Err(Error::Config(format!(
                    "link {k}: peak_time must be finite, got {}",
                    p.peak_time
                )));
            }
        }
        Ok(Self { pulses })
    }

    pub fn n_links(&self) -> usize {
        self.pulses.len()
    }

    pub fn n_dqd(&self) -> usize {
        self.pulses.len() + 1
    }

    pub fn pulses(&self) -> &[GaussianPulse] {
        &self.pulses
    }

    /// Rate of link `k` at time `t`.
    pub fn link_value(&self, link: usize, t: f64) -> Result<f64> {
        let p = self.pulses.get(link).ok_or(Error::IndexOutOfRange {
            index: link,
            dim: self.pulses.len(),
        })?;
        Ok(p.value(t))
    }

    /// All link rates at time `t`.
    pub fn values_at(&self, t: f64) -> Vec<f64> {
        self.pulses.iter().map(|p| p.value(t)).collect()
    }

    /// All link rates at time `t`, written into a caller-owned buffer.
    pub fn values_into(&self, t: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.pulses.len());
        for (o, p) in out.iter_mut().zip(&self.pulses) {
            *o = p.value(t);
        }
    }

    /// Largest peak amplitude over all links.
    pub fn max_amplitude(&self) -> f64 {
        self.pulses.iter().map(|p| p.amplitude).fold(0.0, f64::max)
    }

    /// Schedule with every peak time reflected about `pivot / 2`, i.e.
    /// `peak -> pivot - peak`. For the standard schedule with `pivot = t_max`
    /// this swaps the roles of the first and last links.
    pub fn time_reversed(&self, pivot: f64) -> Self {
        let pulses = self
            .pulses
            .iter()
            .map(|p| GaussianPulse::new(p.amplitude, pivot - p.peak_time, p.std_dev))
            .collect();
        Self { pulses }
    }

    /// Schedule with the link order reversed (spatial flip of the chain).
    pub fn link_reversed(&self) -> Self {
        let mut pulses = self.pulses.clone();
        pulses.reverse();
        Self { pulses }
    }
}

/// The standard counter-intuitive Gaussian schedule.
///
/// Link 0 (first link) peaks at `t_max/2 + sigma` and the last link at
/// `t_max/2 - sigma`, both with amplitude `omega_max` and standard deviation
/// `sigma`. Interior links share a single pulse at `t_max/2` with amplitude
/// `omega_s_max` and standard deviation `sqrt(2) * sigma`.
pub fn make_schedule(config: &ChainConfig) -> Result<PulseSchedule> {
    config.validate()?;
    let sigma = config.sigma();
    let mid = 0.5 * config.t_max;
    let n_links = config.n_links();
    let mut pulses = Vec::with_capacity(n_links);
    pulses.push(GaussianPulse::new(config.omega_max, mid + sigma, sigma));
    for _ in 1..n_links - 1 {
        pulses.push(GaussianPulse::new(
            config.omega_s_max(),
            mid,
            SQRT_2 * sigma,
        ));
    }
    pulses.push(GaussianPulse::new(config.omega_max, mid - sigma, sigma));
    PulseSchedule::from_pulses(pulses)
}
