//! Linear soft-margin SVM trained in the dual.
//!
//! Solves `min 1/2 |w|^2 + C sum xi_i` subject to
//! `y_i (w.x_i + b) >= 1 - xi_i`, `xi_i >= 0`, with an unregularised bias.
//! The dual carries the constraint `sum a_i y_i = 0`, so each step updates
//! a pair of coordinates: the most violating index and, among the indices
//! it can pair with, the one promising the largest objective decrease
//! (first index on ties). The two-variable subproblem is solved in closed
//! form. Iteration stops once the violation drops to `tolerance` or after
//! `max_iterations` steps; either way the last iterate is kept and the
//! outcome recorded.

use serde::{Deserialize, Serialize};

use crate::transcript::Class;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Final maximal KKT violation.
    pub violation: f64,
    /// Dual coefficients, one per training row.
    pub alphas: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sign(c: Class) -> f64 {
    match c {
        Class::Fraud => 1.0,
        Class::NonFraud => -1.0,
    }
}

const QUAD_FLOOR: f64 = 1e-12;

impl LinearSvm {
    pub const DEFAULT_C: f64 = 1.0;
    pub const DEFAULT_TOLERANCE: f64 = 1e-6;
    pub const DEFAULT_MAX_ITERATIONS: usize = 200_000;

    pub fn fit(xs: &[&[f64]], ys: &[Class], c: f64, tolerance: f64, max_iterations: usize) -> LinearSvm {
        let n = xs.len();
        let dim = xs.first().map_or(0, |r| r.len());
        let y: Vec<f64> = ys.iter().map(|&c| sign(c)).collect();
        let kernel: Vec<Vec<f64>> = xs
            .iter()
            .map(|a| xs.iter().map(|b| dot(a, b)).collect())
            .collect();
        let mut alpha = vec![0.0; n];
        let mut grad = vec![-1.0; n];

        let at_upper = |a: f64| a >= c;
        let at_lower = |a: f64| a <= 0.0;
        let in_up = |t: usize, a: f64| if y[t] > 0.0 { !at_upper(a) } else { !at_lower(a) };
        let in_low = |t: usize, a: f64| if y[t] > 0.0 { !at_lower(a) } else { !at_upper(a) };

        let mut iterations = 0;
        let mut violation;
        loop {
            // i: most violating index in I_up; j: second-order choice in I_low
            let (mut i, mut gmax) = (usize::MAX, f64::NEG_INFINITY);
            for t in 0..n {
                let v = -y[t] * grad[t];
                if in_up(t, alpha[t]) && v > gmax {
                    gmax = v;
                    i = t;
                }
            }
            let mut gmin = f64::INFINITY;
            let (mut j, mut best_gain) = (usize::MAX, f64::NEG_INFINITY);
            for t in 0..n {
                if !in_low(t, alpha[t]) {
                    continue;
                }
                let v = -y[t] * grad[t];
                gmin = gmin.min(v);
                if i != usize::MAX && v < gmax {
                    let b = gmax - v;
                    let a = (kernel[i][i] + kernel[t][t] - 2.0 * kernel[i][t]).max(QUAD_FLOOR);
                    let gain = b * b / a;
                    if gain > best_gain {
                        best_gain = gain;
                        j = t;
                    }
                }
            }
            violation = if i == usize::MAX || gmin == f64::INFINITY { 0.0 } else { gmax - gmin };
            if violation <= tolerance || j == usize::MAX || iterations >= max_iterations {
                break;
            }
            iterations += 1;

            let kij = kernel[i][j];
            let (old_i, old_j) = (alpha[i], alpha[j]);
            let quad = (kernel[i][i] + kernel[j][j] - 2.0 * kij).max(QUAD_FLOOR);
            if y[i] != y[j] {
                let delta = (-grad[i] - grad[j]) / quad;
                let diff = alpha[i] - alpha[j];
                alpha[i] += delta;
                alpha[j] += delta;
                if diff > 0.0 {
                    if alpha[j] < 0.0 {
                        alpha[j] = 0.0;
                        alpha[i] = diff;
                    }
                } else if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = -diff;
                }
                if diff > 0.0 {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = c - diff;
                    }
                } else if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = c + diff;
                }
            } else {
                let delta = (grad[i] - grad[j]) / quad;
                let sum = alpha[i] + alpha[j];
                alpha[i] -= delta;
                alpha[j] += delta;
                if sum > c {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = sum - c;
                    }
                } else if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = sum;
                }
                if sum > c {
                    if alpha[j] > c {
                        alpha[j] = c;
                        alpha[i] = sum - c;
                    }
                } else if alpha[i] < 0.0 {
                    alpha[i] = 0.0;
                    alpha[j] = sum;
                }
            }

            let (di, dj) = ((alpha[i] - old_i) * y[i], (alpha[j] - old_j) * y[j]);
            for t in 0..n {
                grad[t] += y[t] * (di * kernel[t][i] + dj * kernel[t][j]);
            }
        }

        let mut w = vec![0.0; dim];
        for (t, x) in xs.iter().enumerate() {
            if alpha[t] != 0.0 {
                for (wk, &xk) in w.iter_mut().zip(x.iter()) {
                    *wk += alpha[t] * y[t] * xk;
                }
            }
        }

        // bias from free vectors, else the midpoint of the feasible interval
        let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut free, mut free_sum) = (0usize, 0.0);
        for t in 0..n {
            let yg = y[t] * grad[t];
            if at_upper(alpha[t]) {
                if y[t] < 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else if at_lower(alpha[t]) {
                if y[t] > 0.0 {
                    ub = ub.min(yg);
                } else {
                    lb = lb.max(yg);
                }
            } else {
                free += 1;
                free_sum += yg;
            }
        }
        let rho = if free > 0 {
            free_sum / free as f64
        } else if ub.is_finite() && lb.is_finite() {
            (ub + lb) / 2.0
        } else {
            0.0
        };

        LinearSvm {
            weights: w,
            bias: -rho,
            c,
            tolerance,
            max_iterations,
            iterations,
            converged: violation <= tolerance,
            violation,
            alphas: alpha,
        }
    }

    pub fn decision_value(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn predict(&self, x: &[f64]) -> Class {
        if self.decision_value(x) >= 0.0 {
            Class::Fraud
        } else {
            Class::NonFraud
        }
    }

    /// `1/2 |w|^2 + C sum max(0, 1 - y (w.x + b))`.
    pub fn primal_objective(&self, xs: &[&[f64]], ys: &[Class]) -> f64 {
        primal_objective(&self.weights, self.bias, self.c, xs, ys)
    }
}

pub fn primal_objective(w: &[f64], b: f64, c: f64, xs: &[&[f64]], ys: &[Class]) -> f64 {
    let hinge: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, &y)| (1.0 - sign(y) * (dot(w, x) + b)).max(0.0))
        .sum();
    0.5 * dot(w, w) + c * hinge
}
