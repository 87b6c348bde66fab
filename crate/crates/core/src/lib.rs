//! Simulator for adiabatic charge transport of an exchange-only spin qubit
//! across a chain of double quantum dots.
//!
//! The chain hosts three electrons: a pair in one double dot (`P`) and a
//! single electron in another (`S`). Gate pulses modulate the tunneling
//! rates between neighbouring double dots; driving them in a
//! counter-intuitive Gaussian sequence transfers the full three-electron
//! state from the head of the chain to the tail while the populated
//! zero-energy eigenspace keeps the interior dots empty.
//!
//! The crate is organised along the pipeline:
//!
//! - [`chain_model`] — chain configuration, `|P_a S_b>` position basis,
//!   Gaussian pulse schedules, and the interaction Hamiltonian `W(t)`.
//! - [`dynamics`] — master-equation integration of the density matrix with
//!   pure dephasing.
//! - [`spectral`] — instantaneous spectra, the degenerate zero-energy
//!   eigenstates and transport dark state, and leakage diagnostics.
//! - [`analysis`] — parameter sweeps, optimal-pulse-time search,
//!   control-miscalibration studies, and the transfer-time comparison
//!   against successive SWAP gates.
//!
//! All quantities use natural units: rates in units of a reference
//! tunneling rate and times in its inverse (`hbar = 1`). Pulse times are
//! conventionally quoted in units of `pi / omega_max`.

pub mod analysis;
pub mod chain_model;
pub mod dynamics;
pub mod error;
pub mod spectral;

pub use chain_model::{
    basis_label, basis_labels, build_hamiltonian, flat_index, make_schedule, BasisIndex,
    ChainConfig, CouplingLayout, GaussianPulse, HamiltonianFrame, PulseSchedule,
};
pub use dynamics::{
    evolve, evolve_with, rhs, transfer_probability, transfer_probability_with, DensityMatrix,
    EvolveOptions, Trajectory,
};
pub use error::{Error, Result};
pub use spectral::{
    dark_state, degenerate_triplet, leakage, spectrum_at, DarkState, SpectrumSample,
};
