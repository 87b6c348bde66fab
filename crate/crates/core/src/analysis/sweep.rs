use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::miscalibration::{perturb_schedule, MiscalibrationSpec};
use crate::chain_model::{make_schedule, ChainConfig, PulseSchedule};
use crate::dynamics::{transfer_probability_with, EvolveOptions};
use crate::error::{Error, Result};

/// A sweepable configuration parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// Total pulse time, in units of `pi / omega_max` (using the grid
    /// point's rate when `omega_max` is swept too).
    TMax,
    /// Pure dephasing rate, in the same units as `omega_max`.
    Gamma,
    /// External-pulse peak rate. The raw `t_max` of the base configuration
    /// is kept fixed unless a `t_max` axis says otherwise.
    OmegaMax,
    /// Chain length; values must be odd integers.
    NDqd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisSpacing {
    Linear,
    Log,
}

/// One gridded parameter range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: AxisSpacing,
}

impl SweepAxis {
    pub fn linear(param: SweepParam, min: f64, max: f64, count: usize) -> Self {
        Self {
            param,
            min,
            max,
            count,
            spacing: AxisSpacing::Linear,
        }
    }

    pub fn log(param: SweepParam, min: f64, max: f64, count: usize) -> Self {
        Self {
            param,
            min,
            max,
            count,
            spacing: AxisSpacing::Log,
        }
    }

    /// The grid coordinates along this axis.
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count < 2 {
            return Err(Error::Config(format!(
                "axis needs at least 2 points, got {}",
                self.count
            )));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.min >= self.max {
            return Err(Error::Config(format!(
                "axis range must be finite with min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        let positive_min = match self.param {
            SweepParam::TMax | SweepParam::OmegaMax => 0.0f64,
            SweepParam::Gamma => -f64::EPSILON,
            SweepParam::NDqd => 2.0,
        };
        if self.min <= positive_min {
            return Err(Error::Config(format!(
                "axis minimum {} is out of range for {:?}",
                self.min, self.param
            )));
        }
        if self.spacing == AxisSpacing::Log && self.min <= 0.0 {
            return Err(Error::Config("log spacing needs a positive minimum".into()));
        }
        let n = self.count;
        let raw: Vec<f64> = match self.spacing {
            AxisSpacing::Linear => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
            AxisSpacing::Log => {
                let (a, b) = (self.min.ln(), self.max.ln());
                (0..n)
                    .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                    .collect()
            }
        };
        if self.param == SweepParam::NDqd {
            let mut vals = Vec::with_capacity(n);
            for v in raw {
                let r = v.round();
                if (v - r).abs() > 1e-6 || (r as i64) % 2 == 0 || r < 3.0 {
                    return Err(Error::Config(format!(
                        "n_dqd axis value {v} is not an odd integer >= 3"
                    )));
                }
                vals.push(r);
            }
            return Ok(vals);
        }
        Ok(raw)
    }
}

/// What each grid point measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Final `|P_N S_N>` population of the unperturbed protocol.
    TransferProbability,
    /// `|rho_ff - rho_ideal|` between the perturbed and ideal protocols.
    InfidelityDelta,
}

/// A full sweep definition: base configuration, up to three axes, and the
/// observable to evaluate at every grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ChainConfig,
    pub axes: Vec<SweepAxis>,
    pub observable: Observable,
    /// Control error for the [`Observable::InfidelityDelta`] observable.
    pub perturbation: Option<MiscalibrationSpec>,
    pub options: EvolveOptions,
}

impl SweepSpec {
    pub fn new(base: ChainConfig, axes: Vec<SweepAxis>, observable: Observable) -> Self {
        Self {
            base,
            axes,
            observable,
            perturbation: None,
            options: EvolveOptions::default(),
        }
    }

    pub fn with_perturbation(mut self, perturbation: MiscalibrationSpec) -> Self {
        self.perturbation = Some(perturbation);
        self
    }

    pub fn with_options(mut self, options: EvolveOptions) -> Self {
        self.options = options;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.axes.is_empty() || self.axes.len() > 3 {
            return Err(Error::Config(format!(
                "a sweep takes 1 to 3 axes, got {}",
                self.axes.len()
            )));
        }
        for (i, a) in self.axes.iter().enumerate() {
            a.values()?;
            if self.axes[..i].iter().any(|b| b.param == a.param) {
                return Err(Error::Config(format!(
                    "parameter {:?} appears on two axes",
                    a.param
                )));
            }
        }
        if self.observable == Observable::InfidelityDelta && self.perturbation.is_none() {
            return Err(Error::Config(
                "the infidelity_delta observable needs a perturbation spec".into(),
            ));
        }
        Ok(())
    }
}

/// One evaluated grid point: either a value or a recorded failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// Axis coordinates, in axis order.
    pub coords: Vec<f64>,
    pub value: Option<f64>,
    pub error: Option<String>,
}

/// Everything needed to reproduce a sweep's numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub base: ChainConfig,
    /// The unperturbed schedule of the base configuration.
    pub schedule: PulseSchedule,
    pub options: EvolveOptions,
    pub observable: Observable,
    pub perturbation: Option<MiscalibrationSpec>,
}

/// Gridded sweep output. Points are stored row-major with the last axis
/// varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axes: Vec<SweepAxis>,
    pub axis_values: Vec<Vec<f64>>,
    pub points: Vec<SweepPoint>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    /// Point at the given per-axis indices.
    pub fn get(&self, indices: &[usize]) -> Result<&SweepPoint> {
        if indices.len() != self.axis_values.len() {
            return Err(Error::Argument(format!(
                "expected {} indices, got {}",
                self.axis_values.len(),
                indices.len()
            )));
        }
        let mut flat = 0;
        for (idx, vals) in indices.iter().zip(&self.axis_values) {
            if *idx >= vals.len() {
                return Err(Error::IndexOutOfRange {
                    index: *idx,
                    dim: vals.len(),
                });
            }
            flat = flat * vals.len() + idx;
        }
        Ok(&self.points[flat])
    }

    /// True if every point evaluated successfully.
    pub fn complete(&self) -> bool {
        self.points.iter().all(|p| p.error.is_none())
    }
}

/// Evaluate the observable at every grid point, sequentially.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with_workers(spec, 1)
}

/// Evaluate the observable at every grid point on a bounded worker pool.
///
/// Grid points are independent pure evaluations merged by grid index, so
/// the result is identical for any worker count. Per-point failures are
/// recorded in the output rather than aborting the sweep.
pub fn run_sweep_with_workers(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    if workers == 0 {
        return Err(Error::Argument("worker count must be at least 1".into()));
    }
    let axis_values: Vec<Vec<f64>> = spec
        .axes
        .iter()
        .map(|a| a.values())
        .collect::<Result<_>>()?;
    let counts: Vec<usize> = axis_values.iter().map(Vec::len).collect();
    let total: usize = counts.iter().product();

    let eval = |flat: usize| -> SweepPoint {
        let coords = unravel(flat, &counts)
            .into_iter()
            .enumerate()
            .map(|(ax, i)| axis_values[ax][i])
            .collect::<Vec<f64>>();
        match eval_point(spec, &coords) {
            Ok(value) => SweepPoint {
                coords,
                value: Some(value),
                error: None,
            },
            Err(e) => SweepPoint {
                coords,
                value: None,
                error: Some(e.to_string()),
            },
        }
    };

    let points: Vec<SweepPoint> = if workers == 1 {
        (0..total).map(eval).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Argument(format!("worker pool: {e}")))?;
        pool.install(|| (0..total).into_par_iter().map(eval).collect())
    };

    Ok(SweepResult {
        axes: spec.axes.clone(),
        axis_values,
        points,
        provenance: Provenance {
            base: spec.base.clone(),
            schedule: make_schedule(&spec.base)?,
            options: spec.options,
            observable: spec.observable,
            perturbation: spec.perturbation,
        },
    })
}

/// Row-major index -> per-axis indices, last axis fastest.
fn unravel(mut flat: usize, counts: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; counts.len()];
    for (i, &c) in counts.iter().enumerate().rev() {
        idx[i] = flat % c;
        flat /= c;
    }
    idx
}

/// The base configuration with one grid point's coordinates applied.
/// Rates and the chain length are applied before `t_max` so that a
/// `t_max` coordinate in `pi / omega_max` units refers to the swept rate.
fn config_at(base: &ChainConfig, axes: &[SweepAxis], coords: &[f64]) -> ChainConfig {
    let mut c = base.clone();
    for (a, &v) in axes.iter().zip(coords) {
        match a.param {
            SweepParam::OmegaMax => c.omega_max = v,
            SweepParam::Gamma => c.gamma = v,
            SweepParam::NDqd => c.n_dqd = v.round() as usize,
            SweepParam::TMax => {}
        }
    }
    for (a, &v) in axes.iter().zip(coords) {
        if a.param == SweepParam::TMax {
            c.t_max = v * PI / c.omega_max;
        }
    }
    c
}

fn eval_point(spec: &SweepSpec, coords: &[f64]) -> Result<f64> {
    let config = config_at(&spec.base, &spec.axes, coords);
    config.validate()?;
    let schedule = make_schedule(&config)?;
    match spec.observable {
        Observable::TransferProbability => {
            transfer_probability_with(&config, &schedule, &spec.options)
        }
        Observable::InfidelityDelta => {
            let pert_spec = spec
                .perturbation
                .as_ref()
                .expect("validated: perturbation present");
            let perturbed = perturb_schedule(&schedule, pert_spec)?;
            let ideal = transfer_probability_with(&config, &schedule, &spec.options)?;
            let actual = transfer_probability_with(&config, &perturbed, &spec.options)?;
            Ok((actual - ideal).abs())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::miscalibration::{MiscalibrationKind, MiscalibrationTarget};
    use approx::assert_abs_diff_eq;

    fn quick_options() -> EvolveOptions {
        // Coarse but still inside the RK4 stability region for the
        // 10x interior rates of chains longer than 3 dots.
        EvolveOptions {
            steps_per_t_max: 800,
            samples: 2,
            snapshots: 0,
        }
    }

    #[test]
    fn linear_axis_values() {
        let a = SweepAxis::linear(SweepParam::Gamma, 0.0, 0.08, 5);
        let v = a.values().unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], 0.0);
        assert_abs_diff_eq!(v[1], 0.02, epsilon = 1e-15);
        assert_abs_diff_eq!(v[4], 0.08, epsilon = 1e-15);
    }

    #[test]
    fn log_axis_values() {
        let a = SweepAxis::log(SweepParam::OmegaMax, 1.0, 100.0, 3);
        let v = a.values().unwrap();
        assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[1], 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[2], 100.0, epsilon = 1e-12);
        assert!(SweepAxis::log(SweepParam::Gamma, 0.0, 1.0, 3)
            .values()
            .is_err());
    }

    #[test]
    fn ndqd_axis_demands_odd_integers() {
        let good = SweepAxis::linear(SweepParam::NDqd, 3.0, 9.0, 4);
        assert_eq!(good.values().unwrap(), vec![3.0, 5.0, 7.0, 9.0]);
        let bad = SweepAxis::linear(SweepParam::NDqd, 3.0, 9.0, 3);
        assert!(bad.values().is_err());
    }

    #[test]
    fn axis_validation() {
        assert!(SweepAxis::linear(SweepParam::TMax, 10.0, 10.0, 2)
            .values()
            .is_err());
        assert!(SweepAxis::linear(SweepParam::TMax, 10.0, 20.0, 1)
            .values()
            .is_err());
        assert!(SweepAxis::linear(SweepParam::TMax, 0.0, 20.0, 2)
            .values()
            .is_err());
        assert!(SweepAxis::linear(SweepParam::Gamma, -0.1, 0.1, 2)
            .values()
            .is_err());
    }

    #[test]
    fn duplicate_axes_rejected() {
        let spec = SweepSpec::new(
            ChainConfig::from_pi_units(3, 1.0, 10.0),
            vec![
                SweepAxis::linear(SweepParam::Gamma, 0.0, 0.1, 2),
                SweepAxis::linear(SweepParam::Gamma, 0.0, 0.2, 2),
            ],
            Observable::TransferProbability,
        );
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn infidelity_needs_perturbation() {
        let spec = SweepSpec::new(
            ChainConfig::from_pi_units(3, 1.0, 10.0),
            vec![SweepAxis::linear(SweepParam::TMax, 5.0, 10.0, 2)],
            Observable::InfidelityDelta,
        );
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn sweep_is_worker_count_invariant() {
        let spec = SweepSpec::new(
            ChainConfig::from_pi_units(3, 1.0, 6.0),
            vec![
                SweepAxis::linear(SweepParam::TMax, 4.0, 8.0, 2),
                SweepAxis::linear(SweepParam::Gamma, 0.0, 0.05, 2),
            ],
            Observable::TransferProbability,
        )
        .with_options(quick_options());
        let seq = run_sweep(&spec).unwrap();
        let par = run_sweep_with_workers(&spec, 3).unwrap();
        assert_eq!(seq.n_points(), 4);
        assert!(seq.complete());
        for (a, b) in seq.points.iter().zip(&par.points) {
            assert_eq!(a, b);
        }
        for p in &seq.points {
            let v = p.value.unwrap();
            assert!((-1e-6..=1.0 + 1e-6).contains(&v), "value {v}");
        }
    }

    #[test]
    fn grid_order_is_last_axis_fastest() {
        let spec = SweepSpec::new(
            ChainConfig::from_pi_units(3, 1.0, 6.0),
            vec![
                SweepAxis::linear(SweepParam::TMax, 4.0, 8.0, 2),
                SweepAxis::linear(SweepParam::Gamma, 0.0, 0.05, 3),
            ],
            Observable::TransferProbability,
        )
        .with_options(quick_options());
        let res = run_sweep(&spec).unwrap();
        assert_eq!(res.points[0].coords, vec![4.0, 0.0]);
        assert_eq!(res.points[1].coords, vec![4.0, 0.025]);
        assert_eq!(res.points[3].coords, vec![8.0, 0.0]);
        assert_eq!(res.get(&[1, 0]).unwrap(), &res.points[3]);
        assert!(res.get(&[2, 0]).is_err());
    }

    #[test]
    fn per_point_failures_are_recorded() {
        // The interior family does not exist at N = 3, so that grid point
        // fails while the N = 5 one succeeds.
        let spec = SweepSpec::new(
            ChainConfig::from_pi_units(3, 1.0, 6.0),
            vec![SweepAxis::linear(SweepParam::NDqd, 3.0, 5.0, 2)],
            Observable::InfidelityDelta,
        )
        .with_perturbation(MiscalibrationSpec::new(
            MiscalibrationTarget::OmegaInterior,
            MiscalibrationKind::Amplitude,
            0.1,
        ))
        .with_options(quick_options());
        let res = run_sweep(&spec).unwrap();
        assert!(!res.complete());
        assert!(res.points[0].error.as_deref().unwrap().contains("interior"));
        assert!(res.points[1].value.is_some());
    }
}
