use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::chain_model::{make_schedule, ChainConfig};
use crate::dynamics::{transfer_probability_with, EvolveOptions};
use crate::error::{Error, Result};

/// Setup for comparing adiabatic transport against successive SWAP gates.
///
/// Times on both sides are reported in units of `h / delta_e_st`. The SWAP
/// side uses the exchange sequence time `t_swap_units` (in `h / J_max`
/// with `J_max = (omega_max)^2 / delta_e_st`) per link. The adiabatic side
/// is the smallest pulse time reaching `ctap_threshold` at zero dephasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapComparisonSpec {
    /// Chain lengths to compare, odd and at least 3.
    pub n_values: Vec<usize>,
    /// External-pulse peak rate, same energy units as `delta_e_st`.
    pub omega_max: f64,
    /// Singlet-triplet splitting setting the SWAP energy scale.
    pub delta_e_st: f64,
    /// SWAP sequence time per link, a pure number of `h / J_max` units.
    pub t_swap_units: f64,
    /// Transfer probability defining the adiabatic transfer time.
    pub ctap_threshold: f64,
    /// Upper end of the threshold search, in `pi / omega_max` units.
    pub scan_max_pi: f64,
    /// Coarse scan step, in `pi / omega_max` units.
    pub scan_step_pi: f64,
    /// Bisection width at which the search stops, in `pi / omega_max`.
    pub time_tol_pi: f64,
}

impl Default for SwapComparisonSpec {
    fn default() -> Self {
        Self {
            n_values: vec![3, 5, 7, 9],
            omega_max: 1.0,
            delta_e_st: 1.0,
            t_swap_units: 11.254,
            ctap_threshold: 0.99,
            scan_max_pi: 120.0,
            scan_step_pi: 5.0,
            time_tol_pi: 0.125,
        }
    }
}

impl SwapComparisonSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::Config("n_values is empty".into()));
        }
        for &n in &self.n_values {
            check_chain_length(n)?;
        }
        for (name, v) in [
            ("omega_max", self.omega_max),
            ("delta_e_st", self.delta_e_st),
            ("t_swap_units", self.t_swap_units),
            ("scan_max_pi", self.scan_max_pi),
            ("scan_step_pi", self.scan_step_pi),
            ("time_tol_pi", self.time_tol_pi),
        ] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::Config(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.ctap_threshold > 0.5 && self.ctap_threshold < 1.0) {
            return Err(Error::Config(format!(
                "ctap_threshold must lie in (0.5, 1), got {}",
                self.ctap_threshold
            )));
        }
        if self.scan_step_pi > self.scan_max_pi {
            return Err(Error::Config(format!(
                "scan_step_pi {} exceeds scan_max_pi {}",
                self.scan_step_pi, self.scan_max_pi
            )));
        }
        Ok(())
    }

    /// `omega_max` as a multiple of `delta_e_st`.
    pub fn rate_ratio(&self) -> f64 {
        self.omega_max / self.delta_e_st
    }
}

fn check_chain_length(n: usize) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "chain length must be odd and at least 3, got {n}"
        )));
    }
    Ok(())
}

/// Which transport scheme wins at one chain length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Faster {
    Ctap,
    Swap,
    /// The adiabatic side never reached the threshold in the scan range.
    Unknown,
}

/// One chain length's comparison entry. Times in `h / delta_e_st`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub n_dqd: usize,
    /// Adiabatic transfer time; `None` if the threshold was unreachable.
    pub t_ctap: Option<f64>,
    /// The same time in `pi / omega_max` units (rate-independent).
    pub t_ctap_pi: Option<f64>,
    pub t_swap: f64,
    pub faster: Faster,
}

/// Transfer-time comparison over a family of chain lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
    /// First chain length whose winner differs from the first row's.
    pub crossover_n: Option<usize>,
}

/// Total time of `(n - 1)` successive SWAP transfers, in `h / delta_e_st`:
/// `(n - 1) * t_swap_units / (omega_max / delta_e_st)^2`. Exactly linear
/// in `n - 1` and quadratic-inverse in the rate.
pub fn swap_transfer_time(spec: &SwapComparisonSpec, n: usize) -> Result<f64> {
    spec.validate()?;
    check_chain_length(n)?;
    let r = spec.rate_ratio();
    Ok((n - 1) as f64 * spec.t_swap_units / (r * r))
}

/// Smallest pulse time (in `pi / omega_max` units) whose dephasing-free
/// transfer probability reaches `threshold`, for each requested chain
/// length. `None` marks lengths where the scan range was not enough.
///
/// Coarse scan at `scan_step_pi` to bracket the first crossing, then
/// bisection down to `time_tol_pi`. In these units the result does not
/// depend on the template's rate, only on the pulse-shape ratios.
pub fn ctap_transfer_times_pi(
    template: &ChainConfig,
    spec: &SwapComparisonSpec,
) -> Result<Vec<(usize, Option<f64>)>> {
    ctap_transfer_times_pi_with(template, spec, &EvolveOptions::default())
}

/// [`ctap_transfer_times_pi`] with explicit integrator options.
pub fn ctap_transfer_times_pi_with(
    template: &ChainConfig,
    spec: &SwapComparisonSpec,
    options: &EvolveOptions,
) -> Result<Vec<(usize, Option<f64>)>> {
    spec.validate()?;
    spec.n_values
        .iter()
        .map(|&n| {
            let mut config = template.clone();
            config.n_dqd = n;
            config.gamma = 0.0;
            config.validate()?;
            Ok((n, threshold_crossing(&config, spec, options)?))
        })
        .collect()
}

fn transfer_at(config: &ChainConfig, t_pi: f64, options: &EvolveOptions) -> Result<f64> {
    let point = config.clone().with_t_max(t_pi * PI / config.omega_max);
    let schedule = make_schedule(&point)?;
    transfer_probability_with(&point, &schedule, options)
}

fn threshold_crossing(
    config: &ChainConfig,
    spec: &SwapComparisonSpec,
    options: &EvolveOptions,
) -> Result<Option<f64>> {
    let threshold = spec.ctap_threshold;
    let mut lo = 0.0;
    let mut hi = None;
    let mut t = spec.scan_step_pi;
    while t <= spec.scan_max_pi + 1e-9 {
        if transfer_at(config, t, options)? >= threshold {
            hi = Some(t);
            break;
        }
        lo = t;
        t += spec.scan_step_pi;
    }
    let Some(mut hi) = hi else {
        return Ok(None);
    };
    // lo = 0 happens when the very first scanned time already passes;
    // bisection then needs a positive lower end.
    if lo == 0.0 {
        lo = 1e-3 * spec.scan_step_pi;
        if transfer_at(config, lo, options)? >= threshold {
            return Ok(Some(lo));
        }
    }
    while hi - lo > spec.time_tol_pi {
        let mid = 0.5 * (lo + hi);
        if transfer_at(config, mid, options)? >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Assemble a comparison table from precomputed adiabatic transfer times
/// (in `pi / omega_max` units). Pure arithmetic: the rate ratio enters
/// only through the unit conversions, so one expensive scan can be reused
/// across rate settings.
pub fn comparison_from_times(
    spec: &SwapComparisonSpec,
    times_pi: &[(usize, Option<f64>)],
) -> Result<ComparisonTable> {
    spec.validate()?;
    let r = spec.rate_ratio();
    let rows: Vec<ComparisonRow> = times_pi
        .iter()
        .map(|&(n, t_pi)| {
            check_chain_length(n)?;
            let t_swap = (n - 1) as f64 * spec.t_swap_units / (r * r);
            let t_ctap = t_pi.map(|tp| tp / (2.0 * r));
            let faster = match t_ctap {
                Some(tc) if tc <= t_swap => Faster::Ctap,
                Some(_) => Faster::Swap,
                None => Faster::Unknown,
            };
            Ok(ComparisonRow {
                n_dqd: n,
                t_ctap,
                t_ctap_pi: t_pi,
                t_swap,
                faster,
            })
        })
        .collect::<Result<_>>()?;
    let crossover_n = rows
        .first()
        .map(|first| first.faster)
        .and_then(|lead| rows.iter().find(|r| r.faster != lead).map(|r| r.n_dqd));
    Ok(ComparisonTable { rows, crossover_n })
}

/// Full comparison: one adiabatic threshold scan per chain length plus the
/// closed-form SWAP times.
pub fn ctap_vs_swap(
    spec: &SwapComparisonSpec,
    config_template: &ChainConfig,
) -> Result<ComparisonTable> {
    ctap_vs_swap_with(spec, config_template, &EvolveOptions::default())
}

/// [`ctap_vs_swap`] with explicit integrator options.
pub fn ctap_vs_swap_with(
    spec: &SwapComparisonSpec,
    config_template: &ChainConfig,
    options: &EvolveOptions,
) -> Result<ComparisonTable> {
    let times = ctap_transfer_times_pi_with(config_template, spec, options)?;
    comparison_from_times(spec, &times)
}
