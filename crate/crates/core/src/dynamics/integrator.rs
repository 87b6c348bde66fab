use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain_model::{ChainConfig, CouplingLayout, Edge, HamiltonianFrame, PulseSchedule};
use crate::dynamics::density::{DensityMatrix, HERMITICITY_TOL, TRACE_TOL};
use crate::error::{Error, Result};

/// Integrator and sampling settings for one evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvolveOptions {
    /// Steps per `t_max` of simulated time; the actual step is
    /// `total_time / ceil(steps_per_t_max * (1 + margin_ratio))`.
    pub steps_per_t_max: usize,
    /// Number of population samples along the trajectory (first and last
    /// step included). Capped at one per step.
    pub samples: usize,
    /// Number of full density-matrix snapshots to keep (0 = none besides
    /// the final state).
    pub snapshots: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            steps_per_t_max: 50_000,
            samples: 2_000,
            snapshots: 0,
        }
    }
}

impl EvolveOptions {
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_snapshots(mut self, snapshots: usize) -> Self {
        self.snapshots = snapshots;
        self
    }

    pub fn with_steps_per_t_max(mut self, steps: usize) -> Self {
        self.steps_per_t_max = steps;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.steps_per_t_max == 0 {
            return Err(Error::Argument("steps_per_t_max must be positive".into()));
        }
        if self.samples < 2 {
            return Err(Error::Argument(format!(
                "samples must be at least 2, got {}",
                self.samples
            )));
        }
        Ok(())
    }
}

/// Sampled history of one evolution.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Sample times, strictly increasing, spanning the full window.
    pub times: Vec<f64>,
    /// Row `r` holds the diagonal of `rho(times[r])` in flat basis order.
    pub populations: Array2<f64>,
    /// `tr(rho)` at each sample time.
    pub traces: Vec<f64>,
    /// `tr(rho^2)` at each sample time.
    pub purities: Vec<f64>,
    /// Full-state snapshots, present when requested in the options.
    /// Positivity is not enforced here; callers assert it through
    /// [`DensityMatrix::min_eigenvalue`] at the resolution they run.
    pub full_states: Vec<DensityMatrix>,
    /// The state at the end of the window.
    pub final_state: DensityMatrix,
    /// Largest Hermiticity error seen at any sample time.
    pub max_hermiticity_drift: f64,
    /// Largest `|tr(rho) - 1|` seen at any step.
    pub max_trace_error: f64,
}

impl Trajectory {
    pub fn n_samples(&self) -> usize {
        self.times.len()
    }

    pub fn dim(&self) -> usize {
        self.populations.ncols()
    }

    pub fn final_populations(&self) -> Vec<f64> {
        self.final_state.populations()
    }

    /// Final population of one basis state.
    pub fn final_population(&self, flat: usize) -> Result<f64> {
        let d = self.dim();
        if flat >= d {
            return Err(Error::IndexOutOfRange {
                index: flat,
                dim: d,
            });
        }
        Ok(self.final_state.matrix[[flat, flat]].re)
    }

    /// Largest sampled population of one basis state over the window.
    pub fn max_population(&self, flat: usize) -> Result<f64> {
        let d = self.dim();
        if flat >= d {
            return Err(Error::IndexOutOfRange {
                index: flat,
                dim: d,
            });
        }
        Ok(self
            .populations
            .column(flat)
            .iter()
            .fold(f64::NEG_INFINITY, |m, &x| m.max(x)))
    }
}

/// Master-equation right-hand side `-i [W, rho] - gamma (rho - diag rho)`.
///
/// Readable reference implementation; the integrator uses an equivalent
/// sparse evaluation tested against this one.
pub fn rhs(rho: &DensityMatrix, w: &HamiltonianFrame, gamma: f64) -> Result<Array2<Complex64>> {
    if rho.dim() != w.dim() {
        return Err(Error::Dimension(format!(
            "state is {} x {} but Hamiltonian is {} x {}",
            rho.dim(),
            rho.dim(),
            w.dim(),
            w.dim()
        )));
    }
    if gamma < 0.0 || !gamma.is_finite() {
        return Err(Error::Argument(format!(
            "gamma must be nonnegative and finite, got {gamma}"
        )));
    }
    let wc = w.matrix.mapv(|x| Complex64::new(x, 0.0));
    let comm = wc.dot(&rho.matrix) - rho.matrix.dot(&wc);
    let mut out = comm.mapv(|z| Complex64::new(z.im, -z.re));
    for ((i, j), o) in out.indexed_iter_mut() {
        if i != j {
            *o -= rho.matrix[[i, j]] * gamma;
        }
    }
    Ok(out)
}

/// Integrate the master equation over the configured window with default
/// options (fixed-step RK4, `h = t_max / 50000`).
pub fn evolve(
    config: &ChainConfig,
    schedule: &PulseSchedule,
    rho0: &DensityMatrix,
) -> Result<Trajectory> {
    evolve_with(config, schedule, rho0, &EvolveOptions::default())
}

/// Integrate the master equation over `[0, t_max (1 + margin_ratio)]`.
///
/// Classical fixed-step RK4 on the vectorized master equation. The state is
/// re-symmetrized after every step and the trace is checked at every step.
/// Purity and positivity are recorded rather than enforced, since their
/// drift scales with the step size and coarse exploratory runs are fine
/// with more of it than converged ones. Identical inputs produce
/// bit-identical trajectories.
pub fn evolve_with(
    config: &ChainConfig,
    schedule: &PulseSchedule,
    rho0: &DensityMatrix,
    options: &EvolveOptions,
) -> Result<Trajectory> {
    config.validate()?;
    options.validate()?;
    if schedule.n_dqd() != config.n_dqd {
        return Err(Error::Dimension(format!(
            "schedule is for a chain of {}, config says {}",
            schedule.n_dqd(),
            config.n_dqd
        )));
    }
    let dim = config.dim();
    if rho0.dim() != dim {
        return Err(Error::Dimension(format!(
            "initial state is {} x {}, expected {} x {}",
            rho0.dim(),
            rho0.dim(),
            dim,
            dim
        )));
    }
    rho0.validate()?;

    let layout = CouplingLayout::new(config.n_dqd);
    let edges = layout.edges();
    let gamma = config.gamma;
    let total = config.total_time();
    let n_steps = ((options.steps_per_t_max as f64) * (1.0 + config.margin_ratio)).ceil() as usize;
    let n_steps = n_steps.max(1);
    let h = total / n_steps as f64;

    let sample_steps = stride_indices(n_steps, options.samples);
    let snapshot_steps = stride_indices(n_steps, options.snapshots);

    let n_links = schedule.n_links();
    let mut rates_a = vec![0.0f64; n_links];
    let mut rates_b = vec![0.0f64; n_links];
    let mut rates_c = vec![0.0f64; n_links];

    let mut rho: Vec<Complex64> = rho0.matrix.iter().copied().collect();
    let mut stage = vec![Complex64::ZERO; dim * dim];
    let mut k = vec![Complex64::ZERO; dim * dim];
    let mut acc = vec![Complex64::ZERO; dim * dim];
    let mut wrho = vec![Complex64::ZERO; dim * dim];

    let mut times = Vec::with_capacity(sample_steps.len());
    let mut pops_flat = Vec::with_capacity(sample_steps.len() * dim);
    let mut traces = Vec::with_capacity(sample_steps.len());
    let mut purities = Vec::with_capacity(sample_steps.len());
    let mut full_states = Vec::with_capacity(snapshot_steps.len());
    let mut max_herm = 0.0f64;
    let mut max_trace_err = 0.0f64;
    let mut next_sample = 0;
    let mut next_snapshot = 0;

    for step in 0..=n_steps {
        let t = step as f64 * h;

        if next_sample < sample_steps.len() && sample_steps[next_sample] == step {
            next_sample += 1;
            times.push(t);
            let mut tr = 0.0;
            for i in 0..dim {
                let p = rho[i * dim + i].re;
                pops_flat.push(p);
                tr += p;
            }
            traces.push(tr);
            let purity: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
            purities.push(purity);
            if !purity.is_finite() {
                return Err(Error::Integration {
                    time: t,
                    reason: "state became non-finite".into(),
                });
            }
            let herm = herm_error(&rho, dim);
            max_herm = max_herm.max(herm);
            if herm > HERMITICITY_TOL {
                return Err(Error::StateValidity(format!(
                    "hermiticity error {herm:.3e} exceeds {HERMITICITY_TOL:.0e} at t = {t}"
                )));
            }
        }

        if next_snapshot < snapshot_steps.len() && snapshot_steps[next_snapshot] == step {
            next_snapshot += 1;
            let matrix = Array2::from_shape_vec((dim, dim), rho.clone())
                .expect("buffer length matches dim^2");
            full_states.push(DensityMatrix { matrix, time: t });
        }

        if step == n_steps {
            break;
        }

        let t_half = t + 0.5 * h;
        let t_next = (step + 1) as f64 * h;
        schedule.values_into(t, &mut rates_a);
        schedule.values_into(t_half, &mut rates_b);
        schedule.values_into(t_next, &mut rates_c);

        sparse_rhs(dim, edges, &rates_a, gamma, &rho, &mut wrho, &mut k);
        acc.copy_from_slice(&k);
        lin_comb(&mut stage, &rho, 0.5 * h, &k);
        sparse_rhs(dim, edges, &rates_b, gamma, &stage, &mut wrho, &mut k);
        axpy(&mut acc, 2.0, &k);
        lin_comb(&mut stage, &rho, 0.5 * h, &k);
        sparse_rhs(dim, edges, &rates_b, gamma, &stage, &mut wrho, &mut k);
        axpy(&mut acc, 2.0, &k);
        lin_comb(&mut stage, &rho, h, &k);
        sparse_rhs(dim, edges, &rates_c, gamma, &stage, &mut wrho, &mut k);
        axpy(&mut acc, 1.0, &k);
        axpy(&mut rho, h / 6.0, &acc);
        symmetrize(&mut rho, dim);

        let tr: f64 = (0..dim).map(|i| rho[i * dim + i].re).sum();
        if !tr.is_finite() {
            return Err(Error::Integration {
                time: t_next,
                reason: "trace became non-finite".into(),
            });
        }
        let tr_err = (tr - 1.0).abs();
        max_trace_err = max_trace_err.max(tr_err);
        if tr_err > TRACE_TOL {
            return Err(Error::StateValidity(format!(
                "trace error {tr_err:.3e} exceeds {TRACE_TOL:.0e} at t = {t_next}"
            )));
        }
    }

    let matrix = Array2::from_shape_vec((dim, dim), rho).expect("buffer length matches dim^2");
    let final_state = DensityMatrix {
        matrix,
        time: total,
    };

    let n_rows = times.len();
    let populations = Array2::from_shape_vec((n_rows, dim), pops_flat).expect("one row per sample");
    Ok(Trajectory {
        times,
        populations,
        traces,
        purities,
        full_states,
        final_state,
        max_hermiticity_drift: max_herm,
        max_trace_error: max_trace_err,
    })
}

/// Transfer probability of the standard protocol: evolve from
/// `|P_1 S_1><P_1 S_1|` and read the final `|P_N S_N>` population.
pub fn transfer_probability(config: &ChainConfig, schedule: &PulseSchedule) -> Result<f64> {
    transfer_probability_with(config, schedule, &EvolveOptions::default())
}

/// [`transfer_probability`] with explicit integrator options.
pub fn transfer_probability_with(
    config: &ChainConfig,
    schedule: &PulseSchedule,
    options: &EvolveOptions,
) -> Result<f64> {
    let rho0 = DensityMatrix::pure(config.dim(), 0)?;
    let traj = evolve_with(config, schedule, &rho0, options)?;
    traj.final_population(config.dim() - 1)
}

/// `count` step indices spread evenly over `0..=n_steps`, deduplicated.
fn stride_indices(n_steps: usize, count: usize) -> Vec<usize> {
    match count {
        0 => Vec::new(),
        1 => vec![n_steps],
        _ => {
            let mut v: Vec<usize> = (0..count)
                .map(|j| ((j * n_steps) as f64 / (count - 1) as f64).round() as usize)
                .collect();
            v.dedup();
            v
        }
    }
}

/// `out = base + a * k`, elementwise.
#[inline]
fn lin_comb(out: &mut [Complex64], base: &[Complex64], a: f64, k: &[Complex64]) {
    for ((o, b), kk) in out.iter_mut().zip(base).zip(k) {
        *o = b + *kk * a;
    }
}

/// `out += a * k`, elementwise.
#[inline]
fn axpy(out: &mut [Complex64], a: f64, k: &[Complex64]) {
    for (o, kk) in out.iter_mut().zip(k) {
        *o += *kk * a;
    }
}

/// In-place `rho <- (rho + rho^dag) / 2`, forcing a real diagonal.
fn symmetrize(rho: &mut [Complex64], dim: usize) {
    for i in 0..dim {
        let ii = i * dim + i;
        rho[ii] = Complex64::new(rho[ii].re, 0.0);
        for j in (i + 1)..dim {
            let ij = i * dim + j;
            let ji = j * dim + i;
            let m = (rho[ij] + rho[ji].conj()) * 0.5;
            rho[ij] = m;
            rho[ji] = m.conj();
        }
    }
}

/// `max |rho_ij - conj(rho_ji)|` on a flat row-major buffer.
fn herm_error(rho: &[Complex64], dim: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in i..dim {
            let diff = rho[i * dim + j] - rho[j * dim + i].conj();
            worst = worst.max(diff.norm());
        }
    }
    worst
}

/// Sparse master-equation right-hand side on flat row-major buffers.
///
/// Uses `rho W = (W rho)^dag` for Hermitian input, so only one sparse
/// product is needed and the output is Hermitian to the last bit: entry
/// `(j, i)` is computed as the exact conjugate of entry `(i, j)`.
fn sparse_rhs(
    dim: usize,
    edges: &[Edge],
    rates: &[f64],
    gamma: f64,
    x: &[Complex64],
    wrho: &mut [Complex64],
    out: &mut [Complex64],
) {
    wrho.fill(Complex64::ZERO);
    for e in edges {
        let v = -rates[e.link];
        if v == 0.0 {
            continue;
        }
        let ro = e.row * dim;
        let co = e.col * dim;
        for q in 0..dim {
            wrho[ro + q] += x[co + q] * v;
            wrho[co + q] += x[ro + q] * v;
        }
    }
    for i in 0..dim {
        let ii = i * dim + i;
        out[ii] = Complex64::new(2.0 * wrho[ii].im, 0.0);
        for j in (i + 1)..dim {
            let ij = i * dim + j;
            let ji = j * dim + i;
            let z = wrho[ij] - wrho[ji].conj();
            let miz = Complex64::new(z.im, -z.re);
            out[ij] = miz - x[ij] * gamma;
            out[ji] = miz.conj() - x[ji] * gamma;
        }
    }
}
