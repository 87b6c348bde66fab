//! Command dispatch: config in, CSV plus metadata sidecar out.

use std::f64::consts::PI;
use std::fs;

use ctap_sim::analysis::{
    ctap_vs_swap_with, find_optimal_tmax_with, miscalibration_curve_with, run_sweep_with_workers,
    AxisSpacing, MiscalibrationKind, MiscalibrationSpec, MiscalibrationTarget, Observable,
    SwapComparisonSpec, SweepParam, SweepResult,
};
use ctap_sim::{evolve_with, make_schedule, spectrum_at, ChainConfig, EvolveOptions};

use crate::config_file::FileConfig;
use crate::error::{CliError, Result};
use crate::manifest::{CommandKind, RunManifest};
use crate::output::{self, Metadata};

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub workers: Option<usize>,
    pub samples: Option<usize>,
    /// Total pulse time in `pi / omega_max` units.
    pub t_max_pi: Option<f64>,
    pub gamma: Option<f64>,
    pub n_dqd: Option<usize>,
}

/// How a run ended when it did not error out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    /// The sweep finished but some grid points failed; their rows carry
    /// the error text in the status column.
    Partial {
        failed_points: usize,
    },
}

/// Execute one manifest: load the config, run the command, write
/// `<stem>.csv` and `<stem>.meta.txt` into the output directory.
pub fn run(manifest: &RunManifest, overrides: &Overrides) -> Result<Outcome> {
    let file = FileConfig::load(&manifest.config_path)?;
    let config = effective_config(&file, overrides).map_err(|e| CliError::Config {
        path: manifest.config_path.clone(),
        message: e.to_string(),
    })?;
    let mut options = file.evolve_options();
    if let Some(samples) = overrides.samples {
        options.samples = samples;
    }
    let workers = overrides.workers.unwrap_or(1);
    if workers == 0 {
        return Err(CliError::Invalid("worker count must be at least 1".into()));
    }

    fs::create_dir_all(&manifest.output_dir).map_err(|e| CliError::Io {
        context: format!("creating output dir {}", manifest.output_dir.display()),
        source: e,
    })?;

    let mut meta = base_metadata(manifest, &config, &options, workers);
    let stem = manifest.command.output_stem();
    let (csv, outcome) = match manifest.command {
        CommandKind::Simulate => (simulate(&config, &options, &mut meta)?, Outcome::Complete),
        CommandKind::Spectrum => (spectrum(&file, &config, &mut meta)?, Outcome::Complete),
        CommandKind::Sweep => sweep(&file, &config, &options, workers, &mut meta)?,
        CommandKind::Optimize => (
            optimize(&file, &config, &options, &mut meta)?,
            Outcome::Complete,
        ),
        CommandKind::Miscalibrate => (
            miscalibrate(&file, &config, &options, &mut meta)?,
            Outcome::Complete,
        ),
        CommandKind::SwapCompare => (
            swap_compare(&file, &config, &options, &mut meta)?,
            Outcome::Complete,
        ),
    };

    output::write_text(&manifest.output_dir.join(format!("{stem}.csv")), &csv)?;
    output::write_text(
        &manifest.output_dir.join(format!("{stem}.meta.txt")),
        &meta.render(),
    )?;
    Ok(outcome)
}

/// The config file's chain configuration with CLI overrides applied.
fn effective_config(file: &FileConfig, overrides: &Overrides) -> ctap_sim::Result<ChainConfig> {
    let mut config = file.chain_config()?;
    if let Some(n) = overrides.n_dqd {
        config.n_dqd = n;
    }
    if let Some(g) = overrides.gamma {
        config.gamma = g;
    }
    if let Some(t_pi) = overrides.t_max_pi {
        config.t_max = t_pi * PI / config.omega_max;
    }
    config.validate()?;
    Ok(config)
}

/// Invocation record plus every effective chain and integrator parameter.
fn base_metadata(
    manifest: &RunManifest,
    config: &ChainConfig,
    options: &EvolveOptions,
    workers: usize,
) -> Metadata {
    let mut meta = Metadata::new();
    meta.push("command", manifest.command);
    meta.push("config_path", manifest.config_path.display());
    meta.push("output_dir", manifest.output_dir.display());
    meta.push("seedless", manifest.seedless);
    meta.push("tool_version", &manifest.tool_version);
    meta.push("n_dqd", config.n_dqd);
    meta.push_float("omega_max", config.omega_max);
    meta.push_float("omega_s_ratio", config.omega_s_ratio);
    meta.push_float("t_max", config.t_max);
    meta.push_float("t_max_pi", config.t_max_pi());
    meta.push_float("sigma_ratio", config.sigma_ratio);
    meta.push_float("gamma", config.gamma);
    meta.push_float("margin_ratio", config.margin_ratio);
    meta.push("steps_per_t_max", options.steps_per_t_max);
    meta.push("samples", options.samples);
    meta.push("snapshots", options.snapshots);
    meta.push("workers", workers);
    meta
}

fn simulate(config: &ChainConfig, options: &EvolveOptions, meta: &mut Metadata) -> Result<String> {
    let schedule = make_schedule(config)?;
    let rho0 = ctap_sim::DensityMatrix::pure(config.dim(), 0)?;
    let trajectory = evolve_with(config, &schedule, &rho0, options)?;
    let transfer = trajectory.final_population(config.dim() - 1)?;
    meta.push_float("final_transfer_probability", transfer);
    meta.push_float("max_trace_error", trajectory.max_trace_error);
    Ok(output::trajectory_csv(&trajectory, config.n_dqd))
}

fn spectrum(file: &FileConfig, config: &ChainConfig, meta: &mut Metadata) -> Result<String> {
    let n_times = file.spectrum_times();
    if n_times < 2 {
        return Err(CliError::Invalid(format!(
            "spectrum needs at least 2 sample times, got {n_times}"
        )));
    }
    let schedule = make_schedule(config)?;
    let samples = (0..n_times)
        .map(|k| {
            let t = config.t_max * k as f64 / (n_times - 1) as f64;
            spectrum_at(&schedule, t, config.n_dqd)
        })
        .collect::<ctap_sim::Result<Vec<_>>>()?;
    meta.push("n_times", n_times);
    Ok(output::spectrum_csv(&samples))
}

fn sweep(
    file: &FileConfig,
    config: &ChainConfig,
    options: &EvolveOptions,
    workers: usize,
    meta: &mut Metadata,
) -> Result<(String, Outcome)> {
    let spec = file.sweep_spec(config.clone(), *options)?;
    let result = run_sweep_with_workers(&spec, workers)?;
    describe_sweep(&spec.observable, &spec.perturbation, &result, meta);
    let failed = result.points.iter().filter(|p| p.error.is_some()).count();
    meta.push("grid_points", result.n_points());
    meta.push("failed_points", failed);
    let outcome = if failed == 0 {
        Outcome::Complete
    } else {
        Outcome::Partial {
            failed_points: failed,
        }
    };
    Ok((output::sweep_csv(&result), outcome))
}

fn describe_sweep(
    observable: &Observable,
    perturbation: &Option<MiscalibrationSpec>,
    result: &SweepResult,
    meta: &mut Metadata,
) {
    meta.push("observable", observable_name(*observable));
    for (k, axis) in result.axes.iter().enumerate() {
        let prefix = format!("axis_{k}");
        meta.push(&format!("{prefix}_param"), param_name(axis.param));
        meta.push_float(&format!("{prefix}_min"), axis.min);
        meta.push_float(&format!("{prefix}_max"), axis.max);
        meta.push(&format!("{prefix}_count"), axis.count);
        meta.push(
            &format!("{prefix}_spacing"),
            match axis.spacing {
                AxisSpacing::Linear => "linear",
                AxisSpacing::Log => "log",
            },
        );
    }
    if let Some(p) = perturbation {
        describe_perturbation(p, meta);
    }
}

fn optimize(
    file: &FileConfig,
    config: &ChainConfig,
    options: &EvolveOptions,
    meta: &mut Metadata,
) -> Result<String> {
    let settings = file.optimize_settings();
    let (t_opt_pi, transfer) = find_optimal_tmax_with(
        config,
        (settings.t_min_pi, settings.t_max_pi),
        settings.resolution_pi,
        options,
    )?;
    meta.push_float("search_t_min_pi", settings.t_min_pi);
    meta.push_float("search_t_max_pi", settings.t_max_pi);
    meta.push_float("search_resolution_pi", settings.resolution_pi);
    meta.push_float("t_opt_pi", t_opt_pi);
    meta.push_float("transfer_probability", transfer);
    Ok(output::optimize_csv(t_opt_pi, transfer))
}

fn miscalibrate(
    file: &FileConfig,
    config: &ChainConfig,
    options: &EvolveOptions,
    meta: &mut Metadata,
) -> Result<String> {
    let (spec, t_axis_pi) = file.miscalibrate_settings()?;
    let curve = miscalibration_curve_with(config, &spec, &t_axis_pi, options)?;
    describe_perturbation(&spec, meta);
    meta.push("t_axis_points", t_axis_pi.len());
    Ok(output::miscalibrate_csv(&curve))
}

fn swap_compare(
    file: &FileConfig,
    config: &ChainConfig,
    options: &EvolveOptions,
    meta: &mut Metadata,
) -> Result<String> {
    let spec = file.swap_compare_spec()?;
    let table = ctap_vs_swap_with(&spec, config, options)?;
    describe_comparison(&spec, meta);
    match table.crossover_n {
        Some(n) => meta.push("crossover_n", n),
        None => meta.push("crossover_n", "none"),
    }
    Ok(output::comparison_csv(&table))
}

fn describe_comparison(spec: &SwapComparisonSpec, meta: &mut Metadata) {
    let n_list = spec
        .n_values
        .iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    meta.push("comparison_n_values", n_list);
    meta.push_float("comparison_omega_max", spec.omega_max);
    meta.push_float("comparison_delta_e_st", spec.delta_e_st);
    meta.push_float("comparison_t_swap_units", spec.t_swap_units);
    meta.push_float("comparison_ctap_threshold", spec.ctap_threshold);
    meta.push_float("comparison_scan_max_pi", spec.scan_max_pi);
    meta.push_float("comparison_scan_step_pi", spec.scan_step_pi);
    meta.push_float("comparison_time_tol_pi", spec.time_tol_pi);
}

fn describe_perturbation(spec: &MiscalibrationSpec, meta: &mut Metadata) {
    meta.push("perturbation_target", target_name(spec.target));
    meta.push("perturbation_kind", kind_name(spec.kind));
    meta.push_float("perturbation_fraction", spec.fraction);
}

fn observable_name(observable: Observable) -> &'static str {
    match observable {
        Observable::TransferProbability => "transfer_probability",
        Observable::InfidelityDelta => "infidelity_delta",
    }
}

fn param_name(param: SweepParam) -> &'static str {
    match param {
        SweepParam::TMax => "t_max",
        SweepParam::Gamma => "gamma",
        SweepParam::OmegaMax => "omega_max",
        SweepParam::NDqd => "n_dqd",
    }
}

fn target_name(target: MiscalibrationTarget) -> &'static str {
    match target {
        MiscalibrationTarget::OmegaI => "omega_i",
        MiscalibrationTarget::OmegaInterior => "omega_interior",
        MiscalibrationTarget::OmegaF => "omega_f",
    }
}

fn kind_name(kind: MiscalibrationKind) -> &'static str {
    match kind {
        MiscalibrationKind::Amplitude => "amplitude",
        MiscalibrationKind::PeakTime => "peak_time",
    }
}
