use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position of one basis state `|P_a S_b>` of an `N`-dot chain.
///
/// `P_a` is the site of the electron pair and `S_b` the site of the single
/// electron; both are 1-based. States are stored pair-major, so the flat
/// index is `(a - 1) * N + (b - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    /// 1-based site of the electron pair.
    pub pair_site: usize,
    /// 1-based site of the single electron.
    pub single_site: usize,
}

impl BasisIndex {
    pub fn new(n_dqd: usize, pair_site: usize, single_site: usize) -> Result<Self> {
        if pair_site == 0 || pair_site > n_dqd {
            return Err(Error::IndexOutOfRange {
                index: pair_site,
                dim: n_dqd,
            });
        }
        if single_site == 0 || single_site > n_dqd {
            return Err(Error::IndexOutOfRange {
                index: single_site,
                dim: n_dqd,
            });
        }
        Ok(Self {
            pair_site,
            single_site,
        })
    }

    /// Recover sites from a flat index.
    pub fn from_flat(n_dqd: usize, flat: usize) -> Result<Self> {
        if flat >= n_dqd * n_dqd {
            return Err(Error::IndexOutOfRange {
                index: flat,
                dim: n_dqd * n_dqd,
            });
        }
        Ok(Self {
            pair_site: flat / n_dqd + 1,
            single_site: flat % n_dqd + 1,
        })
    }

    pub fn flat_index(&self, n_dqd: usize) -> usize {
        (self.pair_site - 1) * n_dqd + (self.single_site - 1)
    }

    /// Label in the form `"P2S3"`.
    pub fn label(&self) -> String {
        format!("P{}S{}", self.pair_site, self.single_site)
    }
}

/// Flat index of `|P_a S_b>` in the pair-major ordering.
pub fn flat_index(n_dqd: usize, pair_site: usize, single_site: usize) -> Result<usize> {
    Ok(BasisIndex::new(n_dqd, pair_site, single_site)?.flat_index(n_dqd))
}

/// Label of the basis state at a flat index, e.g. `"P2S3"`.
pub fn basis_label(n_dqd: usize, flat: usize) -> Result<String> {
    Ok(BasisIndex::from_flat(n_dqd, flat)?.label())
}

/// All `N^2` labels in flat-index order.
pub fn basis_labels(n_dqd: usize) -> Vec<String> {
    (0..n_dqd * n_dqd)
        .map(|k| {
            BasisIndex::from_flat(n_dqd, k)
                .expect("index in range")
                .label()
        })
        .collect()
}
