use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::features::Dataset;
use crate::transcript::Class;

/// Assignment of every dataset row to one of `k` folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    pub stratified: bool,
    /// Row ids in dataset order.
    pub ids: Vec<String>,
    /// Fold index per row, aligned with `ids`.
    pub folds: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Stratified plan: each class's rows are shuffled with a seeded ChaCha8
/// stream, the classes are laid end to end (non-fraud first) and dealt to
/// folds round-robin. Fold sizes and per-fold class counts then differ by at
/// most one. A class with fewer than `k` rows cannot appear in every fold;
/// that is recorded as a warning.
pub fn make_folds(dataset: &Dataset, k: usize, seed: u64) -> Result<FoldPlan> {
    plan(dataset, k, seed, true)
}

/// Plain shuffled K-fold without stratification.
pub fn make_folds_unstratified(dataset: &Dataset, k: usize, seed: u64) -> Result<FoldPlan> {
    plan(dataset, k, seed, false)
}

fn plan(dataset: &Dataset, k: usize, seed: u64, stratified: bool) -> Result<FoldPlan> {
    let n = dataset.len();
    if k < 2 || n < k {
        return Err(Error::TooFewRows { rows: n, k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = Vec::with_capacity(n);
    let mut warnings = Vec::new();
    if stratified {
        for class in Class::ALL {
            let mut members: Vec<usize> = (0..n).filter(|&i| dataset.label(i) == class).collect();
            if members.len() < k {
                warnings.push(format!(
                    "class {class} has {} rows, fewer than k = {k}; stratification degraded",
                    members.len()
                ));
            }
            members.shuffle(&mut rng);
            order.extend(members);
        }
    } else {
        order.extend(0..n);
        order.shuffle(&mut rng);
    }
    let mut folds = vec![0; n];
    for (pos, &row) in order.iter().enumerate() {
        folds[row] = pos % k;
    }
    Ok(FoldPlan {
        k,
        seed,
        stratified,
        ids: dataset.rows().iter().map(|r| r.id.clone()).collect(),
        folds,
        warnings,
    })
}

impl FoldPlan {
    /// `(train indices, test indices)` for `fold`, each ascending.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.folds.len()).partition(|&i| self.folds[i] != fold)
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.folds {
            sizes[f] += 1;
        }
        sizes
    }

    /// SHA-256 over `id<TAB>fold<LF>` lines, hex encoded.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (id, f) in self.ids.iter().zip(&self.folds) {
            h.update(id.as_bytes());
            h.update(b"\t");
            h.update(f.to_string().as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    pub fn check(&self, dataset: &Dataset) -> Result<()> {
        if self.folds.len() != dataset.len()
            || self.ids.iter().zip(dataset.rows()).any(|(a, r)| *a != r.id)
        {
            return Err(Error::InvalidFoldPlan("row ids differ".into()));
        }
        if let Some(f) = self.folds.iter().find(|&&f| f >= self.k) {
            return Err(Error::InvalidFoldPlan(format!("fold index {f} >= k = {}", self.k)));
        }
        Ok(())
    }
}
