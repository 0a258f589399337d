use serde::{Deserialize, Serialize};

/// Per-feature z-scoring fitted on training rows only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    /// Population standard deviations (n denominator).
    pub sds: Vec<f64>,
}

impl Standardizer {
    pub const SD_FLOOR: f64 = 1e-12;

    pub fn fit(rows: &[&[f64]]) -> Standardizer {
        let dim = rows.first().map_or(0, |r| r.len());
        let n = rows.len() as f64;
        let mut means = vec![0.0; dim];
        for r in rows {
            for (m, &x) in means.iter_mut().zip(r.iter()) {
                *m += x;
            }
        }
        means.iter_mut().for_each(|m| *m /= n);
        let mut sds = vec![0.0; dim];
        for r in rows {
            for ((s, &m), &x) in sds.iter_mut().zip(&means).zip(r.iter()) {
                *s += (x - m) * (x - m);
            }
        }
        sds.iter_mut().for_each(|s| *s = (*s / n).sqrt());
        Standardizer { means, sds }
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.means)
            .zip(&self.sds)
            .map(|((&v, &m), &s)| (v - m) / s.max(Self::SD_FLOOR))
            .collect()
    }
}
