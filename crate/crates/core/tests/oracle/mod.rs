//! Slow, obviously-correct reference implementations used by the tests.
#![allow(dead_code, clippy::needless_range_loop)]

use linguafraud::markers::{MarkerCategory, MARKER_COUNT};

/// Longest-match scan per category, trying every pattern at every position.
pub fn naive_marker_counts(tokens: &[String], categories: &[MarkerCategory]) -> [u64; MARKER_COUNT] {
    let mut out = [0u64; MARKER_COUNT];
    for (slot, cat) in out.iter_mut().zip(categories) {
        let mut i = 0;
        while i < tokens.len() {
            let mut best = 0;
            for p in &cat.patterns {
                if p.len() > best && i + p.len() <= tokens.len() && tokens[i..i + p.len()] == p[..] {
                    best = p.len();
                }
            }
            if best > 0 {
                *slot += 1;
                i += best;
            } else {
                i += 1;
            }
        }
    }
    out
}

/// The eleven sentiment statistics in feature order, computed the long way.
pub fn brute_stats(xs: &[f64]) -> [f64; 11] {
    let n = xs.len();
    let nf = n as f64;
    let mut sorted = xs.to_vec();
    // insertion sort, nothing clever
    for i in 1..n {
        let mut j = i;
        while j > 0 && sorted[j - 1] > sorted[j] {
            sorted.swap(j - 1, j);
            j -= 1;
        }
    }
    let mut total = 0.0;
    for &x in xs {
        total += x;
    }
    let mean = total / nf;
    let min = sorted[0];
    let max = sorted[n - 1];
    let median = if n.is_multiple_of(2) {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    } else {
        sorted[(n - 1) / 2]
    };
    let q = |p: f64| {
        let h = (nf - 1.0) * p;
        let lo = h.floor() as usize;
        if lo + 1 >= n {
            sorted[n - 1]
        } else {
            sorted[lo] + (h - lo as f64) * (sorted[lo + 1] - sorted[lo])
        }
    };
    let iqr = q(0.75) - q(0.25);
    let constant = xs.iter().all(|&x| x == xs[0]);
    let (sd, skew, kurt) = if constant {
        (0.0, 0.0, 0.0)
    } else {
        let moment = |k: i32| xs.iter().map(|&x| (x - mean).powi(k)).sum::<f64>() / nf;
        let var_pop = moment(2);
        let sd = if n > 1 {
            (xs.iter().map(|&x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt()
        } else {
            0.0
        };
        (sd, moment(3) / var_pop.sqrt().powi(3), moment(4) / var_pop.powi(2) - 3.0)
    };
    let pe: f64 = xs.iter().filter(|&&x| x > 0.0).sum();
    let ne: f64 = xs.iter().filter(|&&x| x < 0.0).map(|x| -x).sum();
    [mean, sd, min, max, median, iqr, kurt, skew, pe, ne, nf]
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[r][k] -= f * a[col][k];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for k in r + 1..n {
            s -= a[r][k] * x[k];
        }
        x[r] = s / a[r][r];
    }
    x
}

pub struct QpSolution {
    pub alpha: Vec<f64>,
    pub w: Vec<f64>,
    pub b: f64,
}

/// Soft-margin SVM dual `min 1/2 a'Qa - 1'a, y'a = 0, 0 <= a <= C` by a
/// primal-dual interior point method on the full dense KKT system. The bias
/// is the multiplier of the equality constraint.
pub fn qp_svm(xs: &[Vec<f64>], y: &[f64], c: f64) -> QpSolution {
    let n = xs.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| y[i] * y[j] * dot(&xs[i], &xs[j])).collect())
        .collect();
    let mut a = vec![c / 2.0; n];
    let mut zl = vec![1.0; n];
    let mut zu = vec![1.0; n];
    let mut nu = 0.0;
    for _ in 0..500 {
        let s: Vec<f64> = a.iter().map(|v| c - v).collect();
        let r1: Vec<f64> = (0..n)
            .map(|i| dot(&q[i], &a) - 1.0 + y[i] * nu - zl[i] + zu[i])
            .collect();
        let r2 = dot(y, &a);
        let mu = (dot(&a, &zl) + dot(&s, &zu)) / (2.0 * n as f64);
        let res = r1.iter().fold(r2.abs(), |m, v| m.max(v.abs()));
        if mu < 1e-14 && res < 1e-12 {
            break;
        }
        let target = 0.1 * mu;
        let r3: Vec<f64> = (0..n).map(|i| a[i] * zl[i] - target).collect();
        let r4: Vec<f64> = (0..n).map(|i| s[i] * zu[i] - target).collect();
        let mut m = vec![vec![0.0; n + 1]; n + 1];
        let mut rhs = vec![0.0; n + 1];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = q[i][j];
            }
            m[i][i] += zl[i] / a[i] + zu[i] / s[i];
            m[i][n] = y[i];
            m[n][i] = y[i];
            rhs[i] = -r1[i] - r3[i] / a[i] + r4[i] / s[i];
        }
        rhs[n] = -r2;
        let step = solve_dense(m, rhs);
        let da = &step[..n];
        let dnu = step[n];
        let dzl: Vec<f64> = (0..n).map(|i| (-r3[i] - zl[i] * da[i]) / a[i]).collect();
        let dzu: Vec<f64> = (0..n).map(|i| (-r4[i] + zu[i] * da[i]) / s[i]).collect();
        let mut t_max = f64::INFINITY;
        for i in 0..n {
            for (v, d) in [(a[i], da[i]), (s[i], -da[i]), (zl[i], dzl[i]), (zu[i], dzu[i])] {
                if d < 0.0 {
                    t_max = t_max.min(-v / d);
                }
            }
        }
        let t = (0.99 * t_max).min(1.0);
        for i in 0..n {
            a[i] += t * da[i];
            zl[i] += t * dzl[i];
            zu[i] += t * dzu[i];
        }
        nu += t * dnu;
    }
    let d = xs[0].len();
    let mut w = vec![0.0; d];
    for i in 0..n {
        for k in 0..d {
            w[k] += a[i] * y[i] * xs[i][k];
        }
    }
    QpSolution { alpha: a, w, b: nu }
}

pub fn hinge_objective(w: &[f64], b: f64, c: f64, xs: &[Vec<f64>], y: &[f64]) -> f64 {
    let mut loss = 0.0;
    for (x, &yi) in xs.iter().zip(y) {
        let f: f64 = w.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() + b;
        loss += (1.0 - yi * f).max(0.0);
    }
    0.5 * w.iter().map(|v| v * v).sum::<f64>() + c * loss
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleNode {
    /// `(feature, threshold)` for splits.
    pub split: Option<(usize, f64)>,
    pub counts: [usize; 2],
    pub depth: usize,
}

/// `n * gini` of a child as the fraction `(n^2 - sum n_k^2) / n`.
fn impurity(c: [usize; 2]) -> (i128, i128) {
    let n = (c[0] + c[1]) as i128;
    (n * n - (c[0] * c[0] + c[1] * c[1]) as i128, n)
}

/// CART by trying every (feature, midpoint) and keeping the first strict
/// improvement in scan order.
pub fn oracle_tree(xs: &[Vec<f64>], ys: &[usize], max_depth: usize) -> Vec<OracleNode> {
    let mut out = Vec::new();
    let idx: Vec<usize> = (0..xs.len()).collect();
    grow(xs, ys, &idx, 0, max_depth, &mut out);
    out
}

fn grow(xs: &[Vec<f64>], ys: &[usize], idx: &[usize], depth: usize, max_depth: usize, out: &mut Vec<OracleNode>) {
    let mut counts = [0; 2];
    for &i in idx {
        counts[ys[i]] += 1;
    }
    let at = out.len();
    out.push(OracleNode {
        split: None,
        counts,
        depth,
    });
    if depth >= max_depth || counts[0] == 0 || counts[1] == 0 || idx.len() < 2 {
        return;
    }
    let (pn, pd) = impurity(counts);
    // best child impurity so far as a fraction; starts at the parent's
    let mut best: Option<(usize, f64)> = None;
    let (mut bn, mut bd) = (pn, pd);
    for f in 0..xs[0].len() {
        let mut vals: Vec<f64> = idx.iter().map(|&i| xs[i][f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for pair in vals.windows(2) {
            let thr = (pair[0] + pair[1]) / 2.0;
            let (mut l, mut r) = ([0; 2], [0; 2]);
            for &i in idx {
                if xs[i][f] <= thr {
                    l[ys[i]] += 1;
                } else {
                    r[ys[i]] += 1;
                }
            }
            let (ln, ld) = impurity(l);
            let (rn, rd) = impurity(r);
            let (cn, cd) = (ln * rd + rn * ld, ld * rd);
            if cn * bd < bn * cd {
                best = Some((f, thr));
                bn = cn;
                bd = cd;
            }
        }
    }
    let Some((f, thr)) = best else { return };
    out[at].split = Some((f, thr));
    let left: Vec<usize> = idx.iter().copied().filter(|&i| xs[i][f] <= thr).collect();
    let right: Vec<usize> = idx.iter().copied().filter(|&i| xs[i][f] > thr).collect();
    grow(xs, ys, &left, depth + 1, max_depth, out);
    grow(xs, ys, &right, depth + 1, max_depth, out);
}

/// With `w` fixed the primal is convex and piecewise linear in `b`, with
/// kinks at `y_i - w.x_i`. Returns the interval of minimising `b`; it is a
/// single point whenever the bias is determined.
pub fn optimal_bias_interval(w: &[f64], c: f64, xs: &[Vec<f64>], y: &[f64]) -> (f64, f64) {
    let kinks: Vec<f64> = xs
        .iter()
        .zip(y)
        .map(|(x, &yi)| yi - w.iter().zip(x).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    let values: Vec<f64> = kinks.iter().map(|&b| hinge_objective(w, b, c, xs, y)).collect();
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * best.abs().max(1.0);
    let at_min: Vec<f64> = kinks
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v <= best + tol)
        .map(|(&b, _)| b)
        .collect();
    let lo = at_min.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = at_min.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}
