#![allow(dead_code)]

use ctap_sim::{EvolveOptions, PulseSchedule};
use ndarray::Array2;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
/// Deliberately independent of the LAPACK-backed path used by the library
/// so the two can cross-check each other.
pub fn jacobi_eigenvalues(matrix: &Array2<f64>) -> Vec<f64> {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "matrix must be square");
    let mut a = matrix.clone();
    let fro: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-15 * fro.max(1.0);
    for _sweep in 0..100 {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    s += a[[p, q]] * a[[p, q]];
                }
            }
            (2.0 * s).sqrt()
        };
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq.abs() <= tol / (n as f64) {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[[i, i]]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// Kronecker sum `a (+) a = a x I + I x a`, assembled from the dense
/// definition rather than the library's edge list.
pub fn kron_sum(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    let dim = n * n;
    let mut w = Array2::zeros((dim, dim));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // a x I term: pair index hops i -> j, single index k fixed.
                w[[i * n + k, j * n + k]] += a[[i, j]];
                // I x a term: single index hops i -> j, pair index k fixed.
                w[[k * n + i, k * n + j]] += a[[i, j]];
            }
        }
    }
    w
}

/// The single-particle hopping matrix: tridiagonal with `-omega_k(t)` on
/// the off-diagonals, built straight from the schedule.
pub fn single_hop_matrix(schedule: &PulseSchedule, t: f64) -> Array2<f64> {
    let n = schedule.n_dqd();
    let mut a = Array2::zeros((n, n));
    for link in 0..schedule.n_links() {
        let v = -schedule.link_value(link, t).unwrap();
        a[[link, link + 1]] = v;
        a[[link + 1, link]] = v;
    }
    a
}

/// Integrator options for tests that need speed over the last digits.
pub fn fast_options(steps_per_t_max: usize) -> EvolveOptions {
    EvolveOptions {
        steps_per_t_max,
        samples: 400,
        snapshots: 0,
    }
}

/// The three-dot coupling matrix written out longhand, row by row, with
/// `p` the head-link rate and `q` the tail-link rate at some instant.
/// Basis order P1S1, P1S2, P1S3, P2S1, ..., P3S3.
pub fn printed_three_dot_matrix(p: f64, q: f64) -> Array2<f64> {
    Array2::from_shape_vec(
        (9, 9),
        vec![
            0.0, -p, 0.0, -p, 0.0, 0.0, 0.0, 0.0, 0.0, //
            -p, 0.0, -q, 0.0, -p, 0.0, 0.0, 0.0, 0.0, //
            0.0, -q, 0.0, 0.0, 0.0, -p, 0.0, 0.0, 0.0, //
            -p, 0.0, 0.0, 0.0, -p, 0.0, -q, 0.0, 0.0, //
            0.0, -p, 0.0, -p, 0.0, -q, 0.0, -q, 0.0, //
            0.0, 0.0, -p, 0.0, -q, 0.0, 0.0, 0.0, -q, //
            0.0, 0.0, 0.0, -q, 0.0, 0.0, 0.0, -p, 0.0, //
            0.0, 0.0, 0.0, 0.0, -q, 0.0, -p, 0.0, -q, //
            0.0, 0.0, 0.0, 0.0, 0.0, -q, 0.0, -q, 0.0, //
        ],
    )
    .unwrap()
}
