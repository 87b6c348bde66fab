use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `max |rho - rho^dag|` entries.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Tolerance on `|tr(rho) - 1|`.
pub const TRACE_TOL: f64 = 1e-8;
/// Smallest admissible eigenvalue.
pub const PSD_FLOOR: f64 = -1e-8;
/// Tolerance on `tr(rho^2) = 1` for pure states under unitary evolution.
pub const PURITY_TOL: f64 = 1e-6;

/// The system state at one instant: a Hermitian, unit-trace, positive
/// semidefinite matrix in the `|P_a S_b>` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub matrix: Array2<Complex64>,
    pub time: f64,
}

impl DensityMatrix {
    /// The pure state `|k><k|` at `t = 0`, with `k` a flat basis index.
    pub fn pure(dim: usize, flat: usize) -> Result<Self> {
        if flat >= dim {
            return Err(Error::IndexOutOfRange { index: flat, dim });
        }
        let mut matrix = Array2::zeros((dim, dim));
        matrix[[flat, flat]] = Complex64::new(1.0, 0.0);
        Ok(Self { matrix, time: 0.0 })
    }

    /// Wrap and validate an arbitrary matrix.
    pub fn from_matrix(matrix: Array2<Complex64>, time: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension(format!(
                "density matrix must be square, got {} x {}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let state = Self { matrix, time };
        state.validate()?;
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Diagonal entries (real parts), the basis-state populations.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diag().iter().map(|z| z.re).collect()
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.matrix.diag().iter().map(|z| z.re).sum()
    }

    /// `tr(rho^2)`, computed as `sum |rho_ij|^2` (exact for Hermitian input).
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `max_ij |rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let diff = self.matrix[[i, j]] - self.matrix[[j, i]].conj();
                worst = worst.max(diff.norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue, from a full Hermitian eigendecomposition.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let vals = self
            .matrix
            .eigvalsh(UPLO::Lower)
            .map_err(|e| Error::Numerical(format!("density matrix eigensolve: {e}")))?;
        vals.iter()
            .copied()
            .reduce(f64::min)
            .ok_or_else(|| Error::Numerical("empty spectrum".into()))
    }

    /// Check Hermiticity, trace, and positivity against the shared
    /// tolerances, naming the violated invariant.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm.is_nan() || herm > HERMITICITY_TOL {
            return Err(Error::StateValidity(format!(
                "hermiticity error {herm:.3e} exceeds {HERMITICITY_TOL:.0e} at t = {}",
                self.time
            )));
        }
        let tr_err = (self.trace() - 1.0).abs();
        if tr_err.is_nan() || tr_err > TRACE_TOL {
            return Err(Error::StateValidity(format!(
                "trace error {tr_err:.3e} exceeds {TRACE_TOL:.0e} at t = {}",
                self.time
            )));
        }
        let min_eig = self.min_eigenvalue()?;
        if min_eig.is_nan() || min_eig < PSD_FLOOR {
            return Err(Error::StateValidity(format!(
                "smallest eigenvalue {min_eig:.3e} below {PSD_FLOOR:.0e} at t = {}",
                self.time
            )));
        }
        Ok(())
    }
}
