//! The TOML configuration schema.
//!
//! A config file sets the chain parameters at the top level and holds one
//! optional table per command. Unknown keys anywhere are rejected with the
//! offending key named, so typos cannot silently fall back to defaults.
//! Defaults that do apply are echoed into the metadata sidecar of every
//! output file.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use ctap_sim::analysis::{
    MiscalibrationKind, MiscalibrationSpec, MiscalibrationTarget, Observable, SwapComparisonSpec,
    SweepAxis, SweepParam, SweepSpec,
};
use ctap_sim::{ChainConfig, EvolveOptions};

use crate::error::{CliError, Result};

/// Top-level config file. Exactly one of `t_max` and `t_max_pi` is set;
/// the latter is in units of `pi / omega_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n_dqd: usize,
    pub omega_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max_pi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_s_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator: Option<IntegratorSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub miscalibrate: Option<MiscalibrateSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swap_compare: Option<SwapCompareSection>,
}

/// `[integrator]` table; omitted fields keep the library defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps_per_t_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<usize>,
}

/// `[spectrum]` table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    /// Number of sample times over `[0, t_max]`, endpoints included.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_times: Option<usize>,
}

pub const DEFAULT_SPECTRUM_TIMES: usize = 200;

/// `[sweep]` table with one `[[sweep.axis]]` per swept parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub observable: Observable,
    pub axis: Vec<AxisSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationSection>,
}

/// One sweep axis. `t_max` coordinates are in `pi / omega_max` units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<AxisSpacingName>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisSpacingName {
    Linear,
    Log,
}

/// A control error, used by both `miscalibrate` and perturbation sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSection {
    pub target: MiscalibrationTarget,
    pub kind: MiscalibrationKind,
    pub fraction: f64,
}

impl PerturbationSection {
    pub fn to_spec(self) -> MiscalibrationSpec {
        MiscalibrationSpec::new(self.target, self.kind, self.fraction)
    }
}

/// `[optimize]` table; bounds and resolution in `pi / omega_max` units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_min_pi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max_pi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution_pi: Option<f64>,
}

/// Effective optimizer settings after defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeSettings {
    pub t_min_pi: f64,
    pub t_max_pi: f64,
    pub resolution_pi: f64,
}

impl Default for OptimizeSettings {
    fn default() -> Self {
        Self {
            t_min_pi: 5.0,
            t_max_pi: 60.0,
            resolution_pi: 2.5,
        }
    }
}

/// `[miscalibrate]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MiscalibrateSection {
    pub target: MiscalibrationTarget,
    pub kind: MiscalibrationKind,
    pub fraction: f64,
    /// Pulse times to evaluate, in `pi / omega_max` units.
    pub t_axis_pi: Vec<f64>,
}

/// `[swap_compare]` table; omitted fields keep the library defaults, with
/// the comparison rate defaulting to the top-level `omega_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwapCompareSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_values: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_e_st: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_swap_units: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ctap_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_max_pi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_step_pi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_tol_pi: Option<f64>,
}

impl FileConfig {
    /// Parse and validate a config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io {
            context: format!("reading config {}", path.display()),
            source: e,
        })?;
        let parsed: FileConfig = toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        parsed.chain_config().map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(parsed)
    }

    /// The validated chain configuration this file describes.
    pub fn chain_config(&self) -> ctap_sim::Result<ChainConfig> {
        let t_max = match (self.t_max, self.t_max_pi) {
            (Some(t), None) => t,
            (None, Some(t_pi)) => t_pi * std::f64::consts::PI / self.omega_max,
            (Some(_), Some(_)) => {
                return Err(ctap_sim::Error::Config(
                    "set exactly one of t_max and t_max_pi, got both".into(),
                ))
            }
            (None, None) => {
                return Err(ctap_sim::Error::Config(
                    "set exactly one of t_max and t_max_pi, got neither".into(),
                ))
            }
        };
        let mut config = ChainConfig::new(self.n_dqd, self.omega_max, t_max);
        if let Some(g) = self.gamma {
            config.gamma = g;
        }
        if let Some(r) = self.omega_s_ratio {
            config.omega_s_ratio = r;
        }
        if let Some(r) = self.sigma_ratio {
            config.sigma_ratio = r;
        }
        if let Some(r) = self.margin_ratio {
            config.margin_ratio = r;
        }
        config.validate()?;
        Ok(config)
    }

    /// Integrator options after defaults.
    pub fn evolve_options(&self) -> EvolveOptions {
        let mut options = EvolveOptions::default();
        if let Some(section) = self.integrator {
            if let Some(s) = section.steps_per_t_max {
                options.steps_per_t_max = s;
            }
            if let Some(s) = section.samples {
                options.samples = s;
            }
            if let Some(s) = section.snapshots {
                options.snapshots = s;
            }
        }
        options
    }

    /// Spectrum sample count after defaults.
    pub fn spectrum_times(&self) -> usize {
        self.spectrum
            .and_then(|s| s.n_times)
            .unwrap_or(DEFAULT_SPECTRUM_TIMES)
    }

    /// The full sweep definition, or an error naming the missing table.
    pub fn sweep_spec(&self, base: ChainConfig, options: EvolveOptions) -> Result<SweepSpec> {
        let section = self
            .sweep
            .as_ref()
            .ok_or_else(|| CliError::Invalid("the sweep command needs a [sweep] table".into()))?;
        let axes: Vec<SweepAxis> = section
            .axis
            .iter()
            .map(|a| match a.spacing.unwrap_or(AxisSpacingName::Linear) {
                AxisSpacingName::Linear => SweepAxis::linear(a.param, a.min, a.max, a.count),
                AxisSpacingName::Log => SweepAxis::log(a.param, a.min, a.max, a.count),
            })
            .collect();
        let mut spec = SweepSpec::new(base, axes, section.observable).with_options(options);
        if let Some(p) = section.perturbation {
            spec = spec.with_perturbation(p.to_spec());
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Optimizer settings after defaults.
    pub fn optimize_settings(&self) -> OptimizeSettings {
        let mut settings = OptimizeSettings::default();
        if let Some(section) = self.optimize {
            if let Some(v) = section.t_min_pi {
                settings.t_min_pi = v;
            }
            if let Some(v) = section.t_max_pi {
                settings.t_max_pi = v;
            }
            if let Some(v) = section.resolution_pi {
                settings.resolution_pi = v;
            }
        }
        settings
    }

    /// Miscalibration settings, or an error naming the missing table.
    pub fn miscalibrate_settings(&self) -> Result<(MiscalibrationSpec, Vec<f64>)> {
        let section = self.miscalibrate.as_ref().ok_or_else(|| {
            CliError::Invalid("the miscalibrate command needs a [miscalibrate] table".into())
        })?;
        let spec = MiscalibrationSpec::new(section.target, section.kind, section.fraction);
        spec.validate()?;
        Ok((spec, section.t_axis_pi.clone()))
    }

    /// Comparison settings after defaults.
    pub fn swap_compare_spec(&self) -> ctap_sim::Result<SwapComparisonSpec> {
        let mut spec = SwapComparisonSpec {
            omega_max: self.omega_max,
            ..SwapComparisonSpec::default()
        };
        if let Some(section) = &self.swap_compare {
            if let Some(v) = &section.n_values {
                spec.n_values = v.clone();
            }
            if let Some(v) = section.omega_max {
                spec.omega_max = v;
            }
            if let Some(v) = section.delta_e_st {
                spec.delta_e_st = v;
            }
            if let Some(v) = section.t_swap_units {
                spec.t_swap_units = v;
            }
            if let Some(v) = section.ctap_threshold {
                spec.ctap_threshold = v;
            }
            if let Some(v) = section.scan_max_pi {
                spec.scan_max_pi = v;
            }
            if let Some(v) = section.scan_step_pi {
                spec.scan_step_pi = v;
            }
            if let Some(v) = section.time_tol_pi {
                spec.time_tol_pi = v;
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Serialize back to TOML. Parsing the output yields an equal value.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self)
            .map_err(|e| CliError::Invalid(format!("serializing config: {e}")))
    }
}
