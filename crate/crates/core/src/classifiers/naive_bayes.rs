use serde::{Deserialize, Serialize};

use crate::transcript::Class;

/// Gaussian naive Bayes over two classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    /// Indexed by class (0 = non-fraud, 1 = fraud).
    pub priors: [f64; 2],
    pub means: [Vec<f64>; 2],
    /// Per-class maximum-likelihood variances plus `smoothing`.
    pub variances: [Vec<f64>; 2],
    pub smoothing: f64,
}

impl GaussianNb {
    pub const SMOOTHING_FACTOR: f64 = 1e-9;

    /// Both classes must be present in `ys`.
    pub fn fit(xs: &[&[f64]], ys: &[Class]) -> GaussianNb {
        let dim = xs[0].len();
        let n = xs.len() as f64;

        // smoothing scales with the largest per-feature variance over all rows
        let mut largest = 0.0f64;
        for j in 0..dim {
            let mean = xs.iter().map(|r| r[j]).sum::<f64>() / n;
            let var = xs.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
            largest = largest.max(var);
        }
        let smoothing = if largest > 0.0 {
            Self::SMOOTHING_FACTOR * largest
        } else {
            Self::SMOOTHING_FACTOR
        };

        let mut priors = [0.0; 2];
        let mut means = [vec![0.0; dim], vec![0.0; dim]];
        let mut variances = [vec![0.0; dim], vec![0.0; dim]];
        for c in Class::ALL {
            let k = c.index();
            let rows: Vec<&[f64]> = xs
                .iter()
                .zip(ys)
                .filter(|(_, &y)| y == c)
                .map(|(x, _)| *x)
                .collect();
            let nc = rows.len() as f64;
            priors[k] = nc / n;
            for j in 0..dim {
                let m = rows.iter().map(|r| r[j]).sum::<f64>() / nc;
                let v = rows.iter().map(|r| (r[j] - m).powi(2)).sum::<f64>() / nc;
                means[k][j] = m;
                variances[k][j] = v + smoothing;
            }
        }
        GaussianNb {
            priors,
            means,
            variances,
            smoothing,
        }
    }

    /// Unnormalised log joint `ln P(c) + sum_j ln N(x_j; mu_cj, var_cj)`.
    pub fn log_joint(&self, x: &[f64]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (k, o) in out.iter_mut().enumerate() {
            let mut lp = self.priors[k].ln();
            for ((&v, &m), &var) in x.iter().zip(&self.means[k]).zip(&self.variances[k]) {
                lp -= 0.5 * (2.0 * std::f64::consts::PI * var).ln() + (v - m).powi(2) / (2.0 * var);
            }
            *o = lp;
        }
        out
    }

    pub fn posterior(&self, x: &[f64]) -> [f64; 2] {
        let lj = self.log_joint(x);
        let top = lj[0].max(lj[1]);
        let e = [(lj[0] - top).exp(), (lj[1] - top).exp()];
        let z = e[0] + e[1];
        [e[0] / z, e[1] / z]
    }

    /// Fraud only when its log joint is strictly larger.
    pub fn predict(&self, x: &[f64]) -> Class {
        let lj = self.log_joint(x);
        if lj[1] > lj[0] {
            Class::Fraud
        } else {
            Class::NonFraud
        }
    }
}
