//! Parameter studies built on top of the integrator: transfer-time
//! optimisation, pulse miscalibration, parameter sweeps, and the
//! comparison against sequential SWAP transport.

mod miscalibration;
mod optimize;
mod swap_compare;
mod sweep;

pub use miscalibration::{
    miscalibration_curve, miscalibration_curve_with, perturb_schedule, MiscalibrationKind,
    MiscalibrationSpec, MiscalibrationTarget,
};
pub use optimize::{find_optimal_tmax, find_optimal_tmax_with, PLATEAU_TOL};
pub use swap_compare::{
    comparison_from_times, ctap_transfer_times_pi, ctap_transfer_times_pi_with, ctap_vs_swap,
    ctap_vs_swap_with, swap_transfer_time, ComparisonRow, ComparisonTable, Faster,
    SwapComparisonSpec,
};
pub use sweep::{
    run_sweep, run_sweep_with_workers, AxisSpacing, Observable, Provenance, SweepAxis, SweepParam,
    SweepPoint, SweepResult, SweepSpec,
};
