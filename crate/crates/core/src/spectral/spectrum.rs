use ndarray_linalg::{EigValsh, UPLO};

use crate::chain_model::{build_hamiltonian, PulseSchedule};
use crate::error::{Error, Result};

/// Degeneracy tolerance as a fraction of the schedule's peak amplitude:
/// eigenvalues within `DEGENERACY_TOL_RATIO * max_amplitude` of zero count
/// as zero. Well below any pulse scale, well above eigensolver error.
pub const DEGENERACY_TOL_RATIO: f64 = 1e-9;

/// The instantaneous spectrum of `W(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample {
    pub time: f64,
    /// All `N^2` eigenvalues, sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// Number of eigenvalues within the degeneracy tolerance of zero.
    pub zero_multiplicity: usize,
}

impl SpectrumSample {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Eigenvalues of `W(t)` with the zero-energy multiplicity.
pub fn spectrum_at(schedule: &PulseSchedule, t: f64, n_dqd: usize) -> Result<SpectrumSample> {
    let frame = build_hamiltonian(schedule, t, n_dqd)?;
    let mut eigenvalues = frame
        .matrix
        .eigvalsh(UPLO::Lower)
        .map_err(|e| Error::Numerical(format!("spectrum eigensolve at t = {t}: {e}")))?
        .to_vec();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let tol = DEGENERACY_TOL_RATIO * schedule.max_amplitude();
    let zero_multiplicity = eigenvalues.iter().filter(|&&x| x.abs() <= tol).count();
    Ok(SpectrumSample {
        time: t,
        eigenvalues,
        zero_multiplicity,
    })
}
