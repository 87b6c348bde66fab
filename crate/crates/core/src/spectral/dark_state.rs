use ndarray::Array1;

use crate::error::{Error, Result};

/// The zero-energy transport channel of the three-dot chain: the state the
/// system rides from `|P_1 S_1>` to `|P_3 S_3>` as the amplitude ratio
/// `omega_i / omega_f` sweeps from 0 to infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct DarkState {
    /// Components in flat basis order; real and unit norm.
    pub vector: Array1<f64>,
    pub omega_i: f64,
    pub omega_f: f64,
}

fn check_amplitudes(omega_i: f64, omega_f: f64) -> Result<()> {
    if omega_i < 0.0 || !omega_i.is_finite() || omega_f < 0.0 || !omega_f.is_finite() {
        return Err(Error::Argument(format!(
            "pulse amplitudes must be nonnegative and finite, got ({omega_i}, {omega_f})"
        )));
    }
    if omega_i == 0.0 && omega_f == 0.0 {
        return Err(Error::DegenerateAmplitudes);
    }
    Ok(())
}

/// The three zero-energy eigenstates of the `N = 3` chain at link rates
/// `(omega_i, omega_f)`, in the order `(D_0, D_-1, D_1)`.
///
/// Each vector is unit norm and annihilated by `W(omega_i, omega_f)`;
/// `D_-1` is orthogonal to the other two, which are orthogonal to each
/// other only where `2 omega_i^2 = omega_f^2`. The triplet is always
/// linearly independent and spans the zero eigenspace.
pub fn degenerate_triplet(omega_i: f64, omega_f: f64) -> Result<[Array1<f64>; 3]> {
    check_amplitudes(omega_i, omega_f)?;
    let (i2, f2) = (omega_i * omega_i, omega_f * omega_f);

    let mut d0 = Array1::<f64>::zeros(9);
    let n0 = (2.0 * i2 * i2 + f2 * f2).sqrt();
    d0[0] = -(f2 - i2) / n0;
    d0[2] = omega_i * omega_f / n0;
    d0[6] = omega_i * omega_f / n0;
    d0[4] = -i2 / n0;

    let mut dm = Array1::<f64>::zeros(9);
    let nm = (2.0 * (i2 + f2)).sqrt();
    dm[1] = omega_i / nm;
    dm[3] = -omega_i / nm;
    dm[5] = -omega_f / nm;
    dm[7] = omega_f / nm;

    let mut dp = Array1::<f64>::zeros(9);
    let np = 3.0f64.sqrt();
    dp[0] = 1.0 / np;
    dp[4] = -1.0 / np;
    dp[8] = 1.0 / np;

    Ok([d0, dm, dp])
}

/// The normalized transport dark state
/// `[omega_f^2 |P_1S_1> - omega_i omega_f (|P_1S_3> + |P_3S_1>)
///   + omega_i^2 |P_3S_3>] / (omega_i^2 + omega_f^2)`.
///
/// It never occupies the central double dot: the components on `|P_1S_2>`,
/// `|P_2S_1>`, `|P_2S_2>`, `|P_2S_3>` and `|P_3S_2>` are identically zero.
pub fn dark_state(omega_i: f64, omega_f: f64) -> Result<DarkState> {
    check_amplitudes(omega_i, omega_f)?;
    let (i2, f2) = (omega_i * omega_i, omega_f * omega_f);
    let norm = i2 + f2;
    let mut vector = Array1::<f64>::zeros(9);
    vector[0] = f2 / norm;
    vector[2] = -omega_i * omega_f / norm;
    vector[6] = -omega_i * omega_f / norm;
    vector[8] = i2 / norm;
    Ok(DarkState {
        vector,
        omega_i,
        omega_f,
    })
}
