//! Instantaneous spectra of `W(t)`, the degenerate zero-energy eigenstates
//! and the transport dark state of the three-dot chain, and leakage out of
//! the zero-energy eigenspace.

mod dark_state;
mod leakage;
mod spectrum;

pub use dark_state::{dark_state, degenerate_triplet, DarkState};
pub use leakage::leakage;
pub use spectrum::{spectrum_at, SpectrumSample, DEGENERACY_TOL_RATIO};
