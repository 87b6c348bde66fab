use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::chain_model::{make_schedule, ChainConfig, PulseSchedule};
use crate::dynamics::{transfer_probability_with, EvolveOptions};
use crate::error::{Error, Result};

/// Which pulse family carries the control error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MiscalibrationTarget {
    /// The first link's pulse.
    OmegaI,
    /// The shared interior pulse (chains of 5 or more).
    OmegaInterior,
    /// The last link's pulse.
    OmegaF,
}

/// Which pulse parameter carries the control error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MiscalibrationKind {
    Amplitude,
    PeakTime,
}

/// One control error: a single pulse family off by a stated fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiscalibrationSpec {
    pub target: MiscalibrationTarget,
    pub kind: MiscalibrationKind,
    /// Relative deviation, e.g. `0.01` for +1%.
    pub fraction: f64,
}

impl MiscalibrationSpec {
    pub fn new(target: MiscalibrationTarget, kind: MiscalibrationKind, fraction: f64) -> Self {
        Self {
            target,
            kind,
            fraction,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.fraction.is_finite() {
            return Err(Error::Argument(format!(
                "miscalibration fraction must be finite, got {}",
                self.fraction
            )));
        }
        Ok(())
    }
}

/// Apply a control error to exactly one pulse family.
///
/// Amplitude errors multiply the peak amplitude by `1 + fraction`;
/// peak-time errors multiply the peak time by `1 + fraction`. Every other
/// pulse is left bit-identical.
pub fn perturb_schedule(
    schedule: &PulseSchedule,
    spec: &MiscalibrationSpec,
) -> Result<PulseSchedule> {
    spec.validate()?;
    let n_links = schedule.n_links();
    let targets: Vec<usize> = match spec.target {
        MiscalibrationTarget::OmegaI => vec![0],
        MiscalibrationTarget::OmegaF => vec![n_links - 1],
        MiscalibrationTarget::OmegaInterior => {
            if n_links < 3 {
                return Err(Error::TargetUnavailable(format!(
                    "a chain of {} has no interior links",
                    schedule.n_dqd()
                )));
            }
            (1..n_links - 1).collect()
        }
    };
    let mut pulses = schedule.pulses().to_vec();
    for idx in targets {
        match spec.kind {
            MiscalibrationKind::Amplitude => pulses[idx].amplitude *= 1.0 + spec.fraction,
            MiscalibrationKind::PeakTime => pulses[idx].peak_time *= 1.0 + spec.fraction,
        }
    }
    PulseSchedule::from_pulses(pulses)
}

/// `|rho_ff - rho_ideal|` at the final time for each pulse length.
///
/// `t_max_axis` is given in units of `pi / omega_max`. For every entry the
/// ideal and the perturbed schedule are both integrated with the same
/// settings, so a zero-fraction error yields an exactly zero curve.
pub fn miscalibration_curve(
    config: &ChainConfig,
    spec: &MiscalibrationSpec,
    t_max_axis: &[f64],
) -> Result<Vec<(f64, f64)>> {
    miscalibration_curve_with(config, spec, t_max_axis, &EvolveOptions::default())
}

/// [`miscalibration_curve`] with explicit integrator options.
pub fn miscalibration_curve_with(
    config: &ChainConfig,
    spec: &MiscalibrationSpec,
    t_max_axis: &[f64],
    options: &EvolveOptions,
) -> Result<Vec<(f64, f64)>> {
    if t_max_axis.is_empty() {
        return Err(Error::Argument("t_max axis is empty".into()));
    }
    spec.validate()?;
    t_max_axis
        .iter()
        .map(|&t_pi| {
            if t_pi <= 0.0 || !t_pi.is_finite() {
                return Err(Error::Argument(format!(
                    "t_max values must be positive and finite, got {t_pi}"
                )));
            }
            let point = config.clone().with_t_max(t_pi * PI / config.omega_max);
            let ideal_schedule = make_schedule(&point)?;
            let perturbed = perturb_schedule(&ideal_schedule, spec)?;
            let rho_ideal = transfer_probability_with(&point, &ideal_schedule, options)?;
            let rho_pert = transfer_probability_with(&point, &perturbed, options)?;
            Ok((t_pi, (rho_pert - rho_ideal).abs()))
        })
        .collect()
}
