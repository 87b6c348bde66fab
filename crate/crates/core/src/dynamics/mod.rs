//! Master-equation integration of the density matrix under the
//! time-dependent chain Hamiltonian with pure dephasing,
//! `d rho / dt = -i [W(t), rho] - Gamma (rho - diag rho)`.

mod density;
mod integrator;

pub use density::{DensityMatrix, HERMITICITY_TOL, PSD_FLOOR, PURITY_TOL, TRACE_TOL};
pub use integrator::{
    evolve, evolve_with, rhs, transfer_probability, transfer_probability_with, EvolveOptions,
    Trajectory,
};
