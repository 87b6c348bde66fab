//! Chain configuration, position basis, pulse schedules, and the
//! interaction Hamiltonian.

mod basis;
mod config;
mod hamiltonian;
mod pulse;

pub use basis::{basis_label, basis_labels, flat_index, BasisIndex};
pub use config::ChainConfig;
pub use hamiltonian::{build_hamiltonian, CouplingLayout, Edge, HamiltonianFrame};
pub use pulse::{make_schedule, GaussianPulse, PulseSchedule};
