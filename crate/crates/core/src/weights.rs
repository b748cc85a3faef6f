//! Photon-number branch weights for coherent collective cavity modes.
//!
//! Mirror dynamics depends only on `n = n_A - n_B`, so the double Poisson
//! table is marginalized onto that difference.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_CUTOFF_SIGMAS: f64 = 8.0;
pub const MIN_CUTOFF_SIGMAS: f64 = 6.0;

/// Poisson terms below this (past the nominal cutoff) are dropped.
const TAIL_EPS: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchWeight {
    pub n: i64,
    pub weight: f64,
}

/// Marginal weight table over the photon-number difference, ascending in `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchWeights {
    entries: Vec<BranchWeight>,
    na_max: u64,
    nb_max: u64,
}

impl BranchWeights {
    pub fn entries(&self) -> &[BranchWeight] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &BranchWeight> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Truncation points of the `n_A` and `n_B` tables.
    pub fn cutoffs(&self) -> (u64, u64) {
        (self.na_max, self.nb_max)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }

    pub fn weight_of(&self, n: i64) -> f64 {
        self.entries
            .binary_search_by_key(&n, |e| e.n)
            .map(|i| self.entries[i].weight)
            .unwrap_or(0.0)
    }

    /// The `n` with the largest weight (smallest `n` on ties).
    pub fn mode(&self) -> Option<i64> {
        self.entries
            .iter()
            .fold(None::<&BranchWeight>, |best, e| match best {
                Some(b) if b.weight >= e.weight => Some(b),
                _ => Some(e),
            })
            .map(|e| e.n)
    }

    pub fn normalized(mut self) -> Self {
        let total = self.total();
        if total > 0.0 {
            for e in &mut self.entries {
                e.weight /= total;
            }
        }
        self
    }
}

/// Truncated double-Poisson table with means `|α_A|²`, `|α_B|²`, marginalized on `n_A - n_B`.
///
/// Each index runs to at least `mean + cutoff_sigmas·√mean`, extended while the
/// Poisson terms stay above `1e-18`.
pub fn coherent_branch_weights(mean_a: f64, mean_b: f64, cutoff_sigmas: f64) -> Result<BranchWeights> {
    if !(cutoff_sigmas >= MIN_CUTOFF_SIGMAS) {
        return Err(Error::param(
            "cutoff_sigmas",
            format!("must be >= {MIN_CUTOFF_SIGMAS}, got {cutoff_sigmas}"),
        ));
    }
    for (name, mean) in [("mean_a", mean_a), ("mean_b", mean_b)] {
        if !(mean >= 0.0) || !mean.is_finite() {
            return Err(Error::param(name, format!("mean photon number must be >= 0, got {mean}")));
        }
    }
    let pa = poisson_table(mean_a, cutoff_sigmas);
    let pb = poisson_table(mean_b, cutoff_sigmas);
    let na_max = pa.len() as u64 - 1;
    let nb_max = pb.len() as u64 - 1;
    let offset = nb_max as i64;
    let mut marginal = vec![0.0; pa.len() + pb.len() - 1];
    for (na, &wa) in pa.iter().enumerate() {
        for (nb, &wb) in pb.iter().enumerate() {
            marginal[(na as i64 - nb as i64 + offset) as usize] += wa * wb;
        }
    }
    let entries = marginal
        .into_iter()
        .enumerate()
        .filter(|(_, w)| *w > 0.0)
        .map(|(i, weight)| BranchWeight {
            n: i as i64 - offset,
            weight,
        })
        .collect();
    Ok(BranchWeights {
        entries,
        na_max,
        nb_max,
    })
}

fn poisson_table(mean: f64, cutoff_sigmas: f64) -> Vec<f64> {
    if mean == 0.0 {
        return vec![1.0];
    }
    let nominal = (mean + cutoff_sigmas * mean.sqrt()).ceil() as usize;
    let ln_mean = mean.ln();
    let mut ln_p = -mean;
    let mut table = vec![ln_p.exp()];
    let mut k = 0usize;
    loop {
        k += 1;
        ln_p += ln_mean - (k as f64).ln();
        let p = ln_p.exp();
        if k > nominal && (k as f64) > mean && p < TAIL_EPS {
            break;
        }
        table.push(p);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_is_single_branch() {
        let w = coherent_branch_weights(0.0, 0.0, 8.0).unwrap();
        assert_eq!(w.entries(), &[BranchWeight { n: 0, weight: 1.0 }]);
        assert_eq!(w.cutoffs(), (0, 0));
    }

    #[test]
    fn poisson_table_sums_to_one() {
        for mean in [0.01, 0.5, 1.0, 16.0, 100.0] {
            let s: f64 = poisson_table(mean, 8.0).iter().sum();
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn nominal_cutoff_is_respected() {
        let t = poisson_table(16.0, 8.0);
        assert!(t.len() > 16 + 32);
    }

    #[test]
    fn rejects_small_cutoff() {
        assert!(coherent_branch_weights(1.0, 1.0, 3.0).is_err());
        assert!(coherent_branch_weights(-1.0, 1.0, 8.0).is_err());
    }

    #[test]
    fn normalization_and_lookup() {
        let w = coherent_branch_weights(16.0, 1.0, 8.0).unwrap().normalized();
        assert_abs_diff_eq!(w.total(), 1.0, epsilon = 1e-15);
        assert_eq!(w.weight_of(10_000), 0.0);
        assert!(w.weight_of(15) > 0.0);
    }
}
