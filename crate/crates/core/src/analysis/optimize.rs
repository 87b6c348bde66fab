use std::f64::consts::PI;

use crate::chain_model::{make_schedule, ChainConfig};
use crate::dynamics::{transfer_probability_with, EvolveOptions};
use crate::error::{Error, Result};

/// At zero dephasing the transfer curve plateaus instead of peaking; the
/// smallest pulse time within this distance of the supremum is reported.
/// The saturation tail is slow (roughly a decade of residual infidelity
/// per 10 pi of pulse time), so a tighter cut would keep chasing it.
pub const PLATEAU_TOL: f64 = 1e-3;

/// Locate the pulse time maximizing the transfer probability.
///
/// `search_range` and `resolution` are in units of `pi / omega_max`, as is
/// the returned optimum. A grid scan at the given resolution is followed
/// by one three-point quadratic refinement around the best grid point.
/// With `gamma = 0` the curve saturates instead of peaking, and the
/// smallest scanned time within [`PLATEAU_TOL`] of the supremum is
/// returned unrefined.
pub fn find_optimal_tmax(
    config: &ChainConfig,
    search_range: (f64, f64),
    resolution: f64,
) -> Result<(f64, f64)> {
    find_optimal_tmax_with(config, search_range, resolution, &EvolveOptions::default())
}

/// [`find_optimal_tmax`] with explicit integrator options.
pub fn find_optimal_tmax_with(
    config: &ChainConfig,
    search_range: (f64, f64),
    resolution: f64,
    options: &EvolveOptions,
) -> Result<(f64, f64)> {
    let (lo, hi) = search_range;
    if !lo.is_finite() || !hi.is_finite() || lo <= 0.0 || lo >= hi {
        return Err(Error::Argument(format!(
            "search range must be positive with min < max, got [{lo}, {hi}]"
        )));
    }
    if resolution <= 0.0 || !resolution.is_finite() || resolution > hi - lo {
        return Err(Error::Argument(format!(
            "resolution must lie in (0, {}], got {resolution}",
            hi - lo
        )));
    }

    let mut grid = Vec::new();
    let mut t = lo;
    while t < hi - 1e-12 * hi {
        grid.push(t);
        t += resolution;
    }
    grid.push(hi);

    let eval = |t_pi: f64| -> Result<f64> {
        let point = config.clone().with_t_max(t_pi * PI / config.omega_max);
        let schedule = make_schedule(&point)?;
        transfer_probability_with(&point, &schedule, options)
    };

    let mut values = Vec::with_capacity(grid.len());
    for &g in &grid {
        values.push(eval(g)?);
    }

    if config.gamma == 0.0 {
        let sup = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let idx = values
            .iter()
            .position(|&v| v >= sup - PLATEAU_TOL)
            .expect("the supremum itself qualifies");
        return Ok((grid[idx], values[idx]));
    }

    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite probabilities"))
        .map(|(i, _)| i)
        .expect("non-empty grid");

    if best == 0 || best == grid.len() - 1 {
        return Ok((grid[best], values[best]));
    }

    // Vertex of the parabola through the best point and its neighbours.
    // The last grid interval may be shorter than the resolution, so use
    // the general three-point form.
    let (x1, x2, x3) = (grid[best - 1], grid[best], grid[best + 1]);
    let (y1, y2, y3) = (values[best - 1], values[best], values[best + 1]);
    let d21 = (y2 - y1) / (x2 - x1);
    let d32 = (y3 - y2) / (x3 - x2);
    let curv = (d32 - d21) / (x3 - x1);
    if curv.is_nan() || curv >= 0.0 {
        return Ok((x2, y2));
    }
    let vertex = 0.5 * (x1 + x2 - d21 / curv);
    let vertex = vertex.clamp(x1, x3);
    let refined = eval(vertex)?;
    if refined > y2 {
        Ok((vertex, refined))
    } else {
        Ok((x2, y2))
    }
}
