use ndarray::Array2;

use crate::chain_model::pulse::PulseSchedule;
use crate::error::{Error, Result};

/// One symmetric coupling between two basis states, tied to the chain link
/// whose pulse sets its strength. Flat indices satisfy `row < col`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub row: usize,
    pub col: usize,
    pub link: usize,
}

/// The sparsity pattern of the interaction matrix for an `N`-dot chain.
///
/// Couplings connect basis states differing by one adjacent hop of either
/// the pair index or the single index, never both. The pattern depends only
/// on `N`, so it is computed once and reused at every evaluation time.
#[derive(Debug, Clone)]
pub struct CouplingLayout {
    n_dqd: usize,
    edges: Vec<Edge>,
}

impl CouplingLayout {
    pub fn new(n_dqd: usize) -> Self {
        let n = n_dqd;
        let mut edges = Vec::with_capacity(2 * n * (n - 1));
        for a in 1..=n {
            for b in 1..=n {
                let idx = (a - 1) * n + (b - 1);
                // Single-electron hop b -> b + 1 on link b - 1.
                if b < n {
                    edges.push(Edge {
                        row: idx,
                        col: idx + 1,
                        link: b - 1,
                    });
                }
                // Pair hop a -> a + 1 on link a - 1.
                if a < n {
                    edges.push(Edge {
                        row: idx,
                        col: idx + n,
                        link: a - 1,
                    });
                }
            }
        }
        Self { n_dqd, edges }
    }

    pub fn n_dqd(&self) -> usize {
        self.n_dqd
    }

    pub fn dim(&self) -> usize {
        self.n_dqd * self.n_dqd
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// The interaction matrix at one instant: real, symmetric, zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianFrame {
    pub matrix: Array2<f64>,
    pub time: f64,
}

impl HamiltonianFrame {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Assemble the interaction matrix at time `t`.
///
/// Entry `[(a,b), (a,b')] = -omega_{b,b'}(t)` for `|b - b'| = 1` (single
/// hop) and `[(a,b), (a',b)] = -omega_{a,a'}(t)` for `|a - a'| = 1` (pair
/// hop); all other entries vanish. Equivalently the Kronecker sum
/// `A(t) (+) A(t)` of the tridiagonal single-particle matrix `A(t)` with
/// off-diagonals `-omega_{k,k+1}(t)`.
pub fn build_hamiltonian(
    schedule: &PulseSchedule,
    t: f64,
    n_dqd: usize,
) -> Result<HamiltonianFrame> {
    if schedule.n_dqd() != n_dqd {
        return Err(Error::Dimension(format!(
            "schedule has {} links (chain of {}), expected n_dqd = {}",
            schedule.n_links(),
            schedule.n_dqd(),
            n_dqd
        )));
    }
    let layout = CouplingLayout::new(n_dqd);
    let rates = schedule.values_at(t);
    let mut matrix = Array2::<f64>::zeros((layout.dim(), layout.dim()));
    for e in layout.edges() {
        let v = -rates[e.link];
        matrix[[e.row, e.col]] = v;
        matrix[[e.col, e.row]] = v;
    }
    Ok(HamiltonianFrame { matrix, time: t })
}
