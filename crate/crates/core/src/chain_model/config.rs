use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complete definition of one transport experiment.
///
/// All rates are in units of a reference tunneling rate and all times in
/// its inverse (`hbar = 1`). The conventional way to quote the total pulse
/// time is in units of `pi / omega_max`; see [`ChainConfig::from_pi_units`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    /// Number of double quantum dots in the chain. Odd, at least 3.
    pub n_dqd: usize,
    /// Peak tunneling rate of the two external pulses.
    pub omega_max: f64,
    /// Peak rate of the shared interior pulse, as a multiple of `omega_max`.
    pub omega_s_ratio: f64,
    /// Total pulse time.
    pub t_max: f64,
    /// Standard deviation of the external pulses, as a fraction of `t_max`.
    pub sigma_ratio: f64,
    /// Pure dephasing rate (same units as `omega_max`).
    pub gamma: f64,
    /// Extra integration time past `t_max`, as a fraction of `t_max`. The
    /// broad interior pulses have tails that outlast `t_max` itself, so the
    /// state is propagated over `[0, t_max * (1 + margin_ratio)]`.
    pub margin_ratio: f64,
}

impl ChainConfig {
    pub const DEFAULT_OMEGA_S_RATIO: f64 = 10.0;
    pub const DEFAULT_SIGMA_RATIO: f64 = 0.125;
    pub const DEFAULT_MARGIN_RATIO: f64 = 0.1;

    /// New configuration with default pulse shape ratios and no dephasing.
    pub fn new(n_dqd: usize, omega_max: f64, t_max: f64) -> Self {
        Self {
            n_dqd,
            omega_max,
            omega_s_ratio: Self::DEFAULT_OMEGA_S_RATIO,
            t_max,
            sigma_ratio: Self::DEFAULT_SIGMA_RATIO,
            gamma: 0.0,
            margin_ratio: Self::DEFAULT_MARGIN_RATIO,
        }
    }

    /// New configuration with `t_max` given in units of `pi / omega_max`.
    pub fn from_pi_units(n_dqd: usize, omega_max: f64, t_max_pi: f64) -> Self {
        Self::new(n_dqd, omega_max, t_max_pi * PI / omega_max)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_omega_s_ratio(mut self, ratio: f64) -> Self {
        self.omega_s_ratio = ratio;
        self
    }

    pub fn with_sigma_ratio(mut self, ratio: f64) -> Self {
        self.sigma_ratio = ratio;
        self
    }

    pub fn with_margin_ratio(mut self, ratio: f64) -> Self {
        self.margin_ratio = ratio;
        self
    }

    /// Check every invariant, naming the violated one on failure.
    pub fn validate(&self) -> Result<()> {
        if self.n_dqd < 3 {
            return Err(Error::Config(format!(
                "n_dqd must be at least 3, got {}",
                self.n_dqd
            )));
        }
        if self.n_dqd.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "n_dqd must be odd, got {}",
                self.n_dqd
            )));
        }
        if self.omega_max <= 0.0 || !self.omega_max.is_finite() {
            return Err(Error::Config(format!(
                "omega_max must be positive and finite, got {}",
                self.omega_max
            )));
        }
        if self.omega_s_ratio <= 0.0 || !self.omega_s_ratio.is_finite() {
            return Err(Error::Config(format!(
                "omega_s_ratio must be positive and finite, got {}",
                self.omega_s_ratio
            )));
        }
        if self.t_max <= 0.0 || !self.t_max.is_finite() {
            return Err(Error::Config(format!(
                "t_max must be positive and finite, got {}",
                self.t_max
            )));
        }
        if !(self.sigma_ratio > 0.0 && self.sigma_ratio < 0.5) {
            return Err(Error::Config(format!(
                "sigma_ratio must lie in (0, 1/2), got {}",
                self.sigma_ratio
            )));
        }
        if self.gamma < 0.0 || !self.gamma.is_finite() {
            return Err(Error::Config(format!(
                "gamma must be nonnegative and finite, got {}",
                self.gamma
            )));
        }
        if self.margin_ratio < 0.0 || !self.margin_ratio.is_finite() {
            return Err(Error::Config(format!(
                "margin_ratio must be nonnegative and finite, got {}",
                self.margin_ratio
            )));
        }
        Ok(())
    }

    /// Standard deviation of the external pulses.
    pub fn sigma(&self) -> f64 {
        self.sigma_ratio * self.t_max
    }

    /// Peak rate of the shared interior pulse.
    pub fn omega_s_max(&self) -> f64 {
        self.omega_s_ratio * self.omega_max
    }

    /// Hilbert-space dimension `N^2`.
    pub fn dim(&self) -> usize {
        self.n_dqd * self.n_dqd
    }

    /// Number of tunneling links, `N - 1`.
    pub fn n_links(&self) -> usize {
        self.n_dqd - 1
    }

    /// End of the integration window, `t_max * (1 + margin_ratio)`.
    pub fn total_time(&self) -> f64 {
        self.t_max * (1.0 + self.margin_ratio)
    }

    /// Total pulse time expressed in units of `pi / omega_max`.
    pub fn t_max_pi(&self) -> f64 {
        self.t_max * self.omega_max / PI
    }
}
