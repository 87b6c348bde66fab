//! Error types shared across the simulator.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A configuration value violates one of its invariants.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Matrix/schedule dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A flat basis index falls outside `0..N^2`.
    #[error("basis index {index} out of range for {dim} states")]
    IndexOutOfRange { index: usize, dim: usize },

    /// The integrator produced a non-finite state.
    #[error("integration failed at t = {time}: {reason}")]
    Integration { time: f64, reason: String },

    /// A density-matrix invariant was breached beyond tolerance.
    #[error("state invariant violated: {0}")]
    StateValidity(String),

    /// An eigensolver did not converge or returned garbage.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An operation needs data that the caller did not record.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A plain argument error (empty range, inverted interval, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The requested pulse family does not exist for this chain length.
    #[error("perturbation target unavailable: {0}")]
    TargetUnavailable(String),

    /// Both link amplitudes vanish; the dark state is undefined.
    #[error("degenerate input: both pulse amplitudes are zero")]
    DegenerateAmplitudes,
}

pub type Result<T> = std::result::Result<T, Error>;
