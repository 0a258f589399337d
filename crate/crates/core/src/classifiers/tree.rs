//! CART classification tree with Gini impurity.
//!
//! Split search is exhaustive over features and over midpoints between
//! consecutive distinct values. Candidate splits are compared exactly on
//! integer class counts, so ties resolve deterministically to the lowest
//! feature index and then the lowest threshold. A node is split only when
//! the weighted child impurity is strictly lower than its own.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::transcript::Class;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        /// Child taken when `x[feature] <= threshold`.
        left: usize,
        right: usize,
        counts: [usize; 2],
        gini: f64,
        gini_decrease: f64,
        depth: usize,
    },
    Leaf {
        class: Class,
        counts: [usize; 2],
        gini: f64,
        depth: usize,
    },
}

impl TreeNode {
    pub fn counts(&self) -> [usize; 2] {
        match self {
            TreeNode::Split { counts, .. } | TreeNode::Leaf { counts, .. } => *counts,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Split { depth, .. } | TreeNode::Leaf { depth, .. } => *depth,
        }
    }
}

/// Nodes in pre-order; `nodes[0]` is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub max_depth: usize,
    pub nodes: Vec<TreeNode>,
}

pub fn gini(counts: [usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let (p0, p1) = (counts[0] as f64 / n, counts[1] as f64 / n);
    1.0 - p0 * p0 - p1 * p1
}

/// Majority class; ties go to non-fraud.
pub fn majority(counts: [usize; 2]) -> Class {
    if counts[1] > counts[0] {
        Class::Fraud
    } else {
        Class::NonFraud
    }
}

/// `sum_k n_k^2 / n` of a node as an exact fraction. Larger means purer;
/// weighted child Gini is `1 - (left + right) / n_parent`.
#[derive(Debug, Clone, Copy)]
struct Purity {
    num: u128,
    den: u128,
}

impl Purity {
    fn node(c: [usize; 2]) -> Purity {
        let (a, b) = (c[0] as u128, c[1] as u128);
        Purity {
            num: a * a + b * b,
            den: a + b,
        }
    }

    fn pair(l: [usize; 2], r: [usize; 2]) -> Purity {
        let (pl, pr) = (Purity::node(l), Purity::node(r));
        Purity {
            num: pl.num * pr.den + pr.num * pl.den,
            den: pl.den * pr.den,
        }
    }

    fn cmp(self, other: Purity) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

struct Candidate {
    feature: usize,
    threshold: f64,
    purity: Purity,
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mut mid = (lo + hi) / 2.0;
    if mid.is_infinite() {
        mid = lo / 2.0 + hi / 2.0;
    }
    if mid >= hi {
        mid = lo;
    }
    mid
}

fn class_counts(ys: &[Class], idx: &[usize]) -> [usize; 2] {
    let mut c = [0; 2];
    for &i in idx {
        c[ys[i].index()] += 1;
    }
    c
}

#[allow(clippy::needless_range_loop)]
fn best_split(xs: &[&[f64]], ys: &[Class], idx: &[usize]) -> Option<Candidate> {
    let dim = xs[idx[0]].len();
    let total = class_counts(ys, idx);
    let parent = Purity::node(total);
    let mut best: Option<Candidate> = None;
    let mut order = idx.to_vec();
    for feature in 0..dim {
        order.sort_by(|&a, &b| xs[a][feature].total_cmp(&xs[b][feature]));
        let mut left = [0usize; 2];
        for p in 1..order.len() {
            left[ys[order[p - 1]].index()] += 1;
            let (lo, hi) = (xs[order[p - 1]][feature], xs[order[p]][feature]);
            if lo >= hi {
                continue;
            }
            let right = [total[0] - left[0], total[1] - left[1]];
            let purity = Purity::pair(left, right);
            let better = match &best {
                None => purity.cmp(parent) == Ordering::Greater,
                Some(b) => purity.cmp(b.purity) == Ordering::Greater,
            };
            if better {
                best = Some(Candidate {
                    feature,
                    threshold: midpoint(lo, hi),
                    purity,
                });
            }
        }
    }
    best
}

impl DecisionTree {
    pub const DEFAULT_MAX_DEPTH: usize = 3;

    /// `xs` and `ys` must be non-empty and of equal length.
    pub fn fit(xs: &[&[f64]], ys: &[Class], max_depth: usize) -> DecisionTree {
        let mut tree = DecisionTree {
            max_depth,
            nodes: Vec::new(),
        };
        let idx: Vec<usize> = (0..xs.len()).collect();
        tree.grow(xs, ys, &idx, 0);
        tree
    }

    fn grow(&mut self, xs: &[&[f64]], ys: &[Class], idx: &[usize], depth: usize) -> usize {
        let counts = class_counts(ys, idx);
        let node_gini = gini(counts);
        let at = self.nodes.len();
        let leaf = TreeNode::Leaf {
            class: majority(counts),
            counts,
            gini: node_gini,
            depth,
        };
        self.nodes.push(leaf);
        let pure = counts[0] == 0 || counts[1] == 0;
        if depth >= self.max_depth || pure || idx.len() < 2 {
            return at;
        }
        let Some(split) = best_split(xs, ys, idx) else {
            return at;
        };
        let (li, ri): (Vec<usize>, Vec<usize>) = idx
            .iter()
            .partition(|&&i| xs[i][split.feature] <= split.threshold);
        let (lc, rc) = (class_counts(ys, &li), class_counts(ys, &ri));
        let n = idx.len() as f64;
        let weighted = (li.len() as f64 * gini(lc) + ri.len() as f64 * gini(rc)) / n;
        let left = self.grow(xs, ys, &li, depth + 1);
        let right = self.grow(xs, ys, &ri, depth + 1);
        self.nodes[at] = TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
            counts,
            gini: node_gini,
            gini_decrease: node_gini - weighted,
            depth,
        };
        at
    }

    /// Index of the leaf reached by `x`.
    pub fn leaf_for(&self, x: &[f64]) -> usize {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Leaf { .. } => return i,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => i = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn predict(&self, x: &[f64]) -> Class {
        match &self.nodes[self.leaf_for(x)] {
            TreeNode::Leaf { class, .. } => *class,
            TreeNode::Split { .. } => unreachable!("leaf_for returns a leaf"),
        }
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(TreeNode::depth).max().unwrap_or(0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }
}
