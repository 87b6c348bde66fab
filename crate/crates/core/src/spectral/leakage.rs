use ndarray_linalg::{Eigh, UPLO};

use crate::chain_model::{build_hamiltonian, PulseSchedule};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::spectrum::DEGENERACY_TOL_RATIO;

/// Population outside the instantaneous zero-energy eigenspace,
/// `1 - tr(P_0(t) rho(t))`, evaluated at every stored snapshot.
///
/// `P_0(t)` is built from all eigenvectors of `W(t)` with eigenvalue below
/// the degeneracy tolerance, so the notion extends to any chain length.
/// Near zero throughout for adiabatic, dephasing-free transport.
pub fn leakage(trajectory: &Trajectory, schedule: &PulseSchedule) -> Result<Vec<f64>> {
    if trajectory.full_states.is_empty() {
        return Err(Error::InsufficientData(
            "leakage needs a trajectory with full density-matrix snapshots".into(),
        ));
    }
    let n_dqd = schedule.n_dqd();
    if n_dqd * n_dqd != trajectory.dim() {
        return Err(Error::Dimension(format!(
            "schedule is for a chain of {} ({} states), trajectory has {}",
            n_dqd,
            n_dqd * n_dqd,
            trajectory.dim()
        )));
    }
    let tol = DEGENERACY_TOL_RATIO * schedule.max_amplitude();
    trajectory
        .full_states
        .iter()
        .map(|snap| {
            let frame = build_hamiltonian(schedule, snap.time, n_dqd)?;
            let (vals, vecs) = frame.matrix.eigh(UPLO::Lower).map_err(|e| {
                Error::Numerical(format!("leakage eigensolve at t = {}: {e}", snap.time))
            })?;
            let mut inside = 0.0;
            for (idx, &lambda) in vals.iter().enumerate() {
                if lambda.abs() > tol {
                    continue;
                }
                let v = vecs.column(idx);
                // <v| rho |v> for a real eigenvector v.
                let mut expect = 0.0;
                for (i, &vi) in v.iter().enumerate() {
                    if vi == 0.0 {
                        continue;
                    }
                    let mut acc = 0.0;
                    for (j, &vj) in v.iter().enumerate() {
                        acc += snap.matrix[[i, j]].re * vj;
                    }
                    expect += vi * acc;
                }
                inside += expect;
            }
            Ok(1.0 - inside)
        })
        .collect()
}
