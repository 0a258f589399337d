use serde::{Deserialize, Serialize};

use crate::transcript::Class;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    pub id: String,
    pub distance: f64,
    pub label: Class,
}

/// k-nearest-neighbours under Euclidean distance.
///
/// Equal distances are ordered by training-row id, so results do not depend
/// on row order. A tied vote (only possible when fewer than three rows are
/// stored) goes to the nearest neighbour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<Class>,
}

impl KnnModel {
    pub const DEFAULT_K: usize = 3;

    pub fn fit(ids: Vec<String>, rows: Vec<Vec<f64>>, labels: Vec<Class>, k: usize) -> KnnModel {
        KnnModel {
            k,
            ids,
            rows,
            labels,
        }
    }

    pub fn effective_k(&self) -> usize {
        self.k.min(self.rows.len())
    }

    pub fn neighbors(&self, x: &[f64]) -> Vec<Neighbor> {
        let mut scored: Vec<(f64, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let d2: f64 = r.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2, i)
            })
            .collect();
        scored.sort_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then_with(|| self.ids[a.1].cmp(&self.ids[b.1]))
        });
        scored
            .into_iter()
            .take(self.effective_k())
            .map(|(d2, i)| Neighbor {
                id: self.ids[i].clone(),
                distance: d2.sqrt(),
                label: self.labels[i],
            })
            .collect()
    }

    pub fn predict(&self, x: &[f64]) -> Class {
        vote(&self.neighbors(x))
    }
}

/// Majority label of `neighbors` (nearest first); a tie goes to the first.
pub fn vote(neighbors: &[Neighbor]) -> Class {
    let fraud = neighbors.iter().filter(|n| n.label == Class::Fraud).count();
    let non = neighbors.len() - fraud;
    match fraud.cmp(&non) {
        std::cmp::Ordering::Greater => Class::Fraud,
        std::cmp::Ordering::Less => Class::NonFraud,
        std::cmp::Ordering::Equal => neighbors[0].label,
    }
}
