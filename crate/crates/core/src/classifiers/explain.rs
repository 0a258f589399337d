use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::knn::{vote, Neighbor};
use super::tree::TreeNode;
use super::{ModelKind, ModelParams, Standardizer, TrainedModel};
use crate::error::{Error, Result};
use crate::transcript::Class;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub feature: String,
    /// Weight on the model-space (standardized when enabled) feature.
    pub weight: f64,
    /// The same weight expressed per raw feature unit.
    pub raw_unit_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbFeatureTable {
    pub feature: String,
    /// Per class, 0 = non-fraud, 1 = fraud.
    pub mean: [f64; 2],
    pub variance: [f64; 2],
}

/// Everything needed to recompute a prediction by hand.
///
/// Inputs are first mapped into model space with `standardizer` when present:
/// `(x - mean) / max(sd, 1e-12)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Explanation {
    DecisionTree {
        feature_names: Vec<String>,
        standardizer: Option<Standardizer>,
        /// Pre-order; go to `left` when `x[feature] <= threshold`.
        nodes: Vec<TreeNode>,
    },
    LinearSvm {
        standardizer: Option<Standardizer>,
        /// Fraud when `sum weight * x + bias >= 0`.
        weights: Vec<WeightEntry>,
        bias: f64,
    },
    NaiveBayes {
        standardizer: Option<Standardizer>,
        priors: [f64; 2],
        /// Fraud when `ln prior + sum ln N(x; mean, variance)` is strictly
        /// larger for class 1.
        tables: Vec<NbFeatureTable>,
    },
    Knn {
        standardizer: Option<Standardizer>,
        k: usize,
        /// Query in model space.
        query: Vec<f64>,
        /// Nearest first; ties in distance ordered by id.
        neighbors: Vec<Neighbor>,
        prediction: Class,
    },
}

/// Explains `model`. k-NN explanations are per query, so `query` is
/// required for them and ignored otherwise.
pub fn export_explanation(model: &TrainedModel, query: Option<&[f64]>) -> Result<Explanation> {
    let standardizer = model.standardizer.clone();
    Ok(match &model.params {
        ModelParams::DecisionTree(t) => Explanation::DecisionTree {
            feature_names: model.feature_names.clone(),
            standardizer,
            nodes: t.nodes.clone(),
        },
        ModelParams::LinearSvm(s) => {
            let weights = model
                .feature_names
                .iter()
                .enumerate()
                .map(|(j, name)| {
                    let scale = standardizer
                        .as_ref()
                        .map_or(1.0, |st| st.sds[j].max(Standardizer::SD_FLOOR));
                    WeightEntry {
                        feature: name.clone(),
                        weight: s.weights[j],
                        raw_unit_weight: s.weights[j] / scale,
                    }
                })
                .collect();
            Explanation::LinearSvm {
                standardizer,
                weights,
                bias: s.bias,
            }
        }
        ModelParams::NaiveBayes(nb) => Explanation::NaiveBayes {
            standardizer,
            priors: nb.priors,
            tables: model
                .feature_names
                .iter()
                .enumerate()
                .map(|(j, name)| NbFeatureTable {
                    feature: name.clone(),
                    mean: [nb.means[0][j], nb.means[1][j]],
                    variance: [nb.variances[0][j], nb.variances[1][j]],
                })
                .collect(),
        },
        ModelParams::Knn(knn) => {
            let query = query.ok_or(Error::MissingQuery)?;
            let x = model.prepare(query)?;
            let neighbors = knn.neighbors(&x);
            Explanation::Knn {
                standardizer,
                k: knn.k,
                prediction: vote(&neighbors),
                query: x,
                neighbors,
            }
        }
    })
}

impl Explanation {
    pub fn kind(&self) -> ModelKind {
        match self {
            Explanation::DecisionTree { .. } => ModelKind::DecisionTree,
            Explanation::LinearSvm { .. } => ModelKind::LinearSvm,
            Explanation::NaiveBayes { .. } => ModelKind::NaiveBayes,
            Explanation::Knn { .. } => ModelKind::Knn,
        }
    }

    /// Human-readable rendering: graph text for trees, sorted weights for
    /// SVMs, likelihood tables for naive Bayes, the neighbour list for k-NN.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Explanation::DecisionTree { .. } => {
                out = render_tree(self).expect("tree explanation");
            }
            Explanation::LinearSvm {
                weights,
                bias,
                standardizer,
            } => {
                let space = if standardizer.is_some() { "standardized" } else { "raw" };
                let _ = writeln!(out, "linear SVM: fraud when w.x + b >= 0 ({space} features)");
                let mut sorted: Vec<&WeightEntry> = weights.iter().collect();
                sorted.sort_by(|a, b| {
                    b.weight.abs().total_cmp(&a.weight.abs()).then_with(|| a.feature.cmp(&b.feature))
                });
                let _ = writeln!(out, "{:<32} {:>14} {:>14}", "feature", "weight", "per raw unit");
                for w in sorted {
                    let _ = writeln!(
                        out,
                        "{:<32} {:>14.6} {:>14.6}",
                        w.feature, w.weight, w.raw_unit_weight
                    );
                }
                let _ = writeln!(out, "{:<32} {:>14.6}", "bias", bias);
            }
            Explanation::NaiveBayes { priors, tables, .. } => {
                let _ = writeln!(
                    out,
                    "Gaussian naive Bayes: priors non_fraud={:.4} fraud={:.4}",
                    priors[0], priors[1]
                );
                let _ = writeln!(
                    out,
                    "{:<32} {:>12} {:>12} {:>12} {:>12}",
                    "feature", "mean v:0", "var v:0", "mean v:1", "var v:1"
                );
                for t in tables {
                    let _ = writeln!(
                        out,
                        "{:<32} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                        t.feature, t.mean[0], t.variance[0], t.mean[1], t.variance[1]
                    );
                }
            }
            Explanation::Knn {
                k,
                neighbors,
                prediction,
                ..
            } => {
                let _ = writeln!(out, "kNN (k={k}): prediction v:{} ({prediction})", prediction.index());
                let _ = writeln!(out, "{:<4} {:<24} {:>12} {:>6}", "rank", "id", "distance", "label");
                for (i, n) in neighbors.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{:<4} {:<24} {:>12.6} {:>6}",
                        i + 1,
                        n.id,
                        n.distance,
                        format!("v:{}", n.label.index())
                    );
                }
            }
        }
        out
    }
}

/// Step-by-step account of how `model` classifies `row`: the decision path
/// for trees, the largest contributions to `w.x + b` for SVMs, per-class log
/// joints for naive Bayes and the neighbour list for k-NN.
pub fn trace_prediction(model: &TrainedModel, row: &[f64]) -> Result<String> {
    let x = model.prepare(row)?;
    let predicted = model.predict(row)?;
    let mut out = String::new();
    match &model.params {
        ModelParams::DecisionTree(t) => {
            let mut i = 0;
            while let TreeNode::Split {
                feature,
                threshold,
                left,
                right,
                ..
            } = &t.nodes[i]
            {
                let goes_left = x[*feature] <= *threshold;
                let _ = writeln!(
                    out,
                    "{} = {} <= {}: {}",
                    model.feature_names[*feature],
                    x[*feature],
                    threshold,
                    if goes_left { "True" } else { "False" }
                );
                i = if goes_left { *left } else { *right };
            }
            let counts = t.nodes[i].counts();
            let _ = writeln!(out, "leaf n{i}: value = [{}, {}]", counts[0], counts[1]);
        }
        ModelParams::LinearSvm(s) => {
            let mut parts: Vec<(f64, &str)> = x
                .iter()
                .zip(&s.weights)
                .zip(&model.feature_names)
                .map(|((v, w), n)| (v * w, n.as_str()))
                .collect();
            parts.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()).then_with(|| a.1.cmp(b.1)));
            for (c, name) in parts.iter().take(5) {
                let _ = writeln!(out, "{name:<32} {c:>+12.6}");
            }
            let _ = writeln!(out, "{:<32} {:>+12.6}", "bias", s.bias);
            let _ = writeln!(out, "{:<32} {:>+12.6}", "w.x + b", s.decision_value(&x));
        }
        ModelParams::NaiveBayes(nb) => {
            let lj = nb.log_joint(&x);
            let p = nb.posterior(&x);
            for c in Class::ALL {
                let k = c.index();
                let _ = writeln!(out, "v:{k} log joint {:.6} posterior {:.6}", lj[k], p[k]);
            }
        }
        ModelParams::Knn(_) => {
            out = export_explanation(model, Some(row))?.to_text();
        }
    }
    let _ = writeln!(out, "prediction: v:{} ({predicted})", predicted.index());
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz `digraph` of a tree explanation: internal nodes read
/// `feature <= threshold`, leaves `v:0` (non-fraud) or `v:1` (fraud), each
/// with its class counts. Returns `None` for non-tree explanations.
pub fn render_tree(explanation: &Explanation) -> Option<String> {
    let Explanation::DecisionTree {
        feature_names,
        nodes,
        ..
    } = explanation
    else {
        return None;
    };
    let mut out = String::new();
    out.push_str("digraph DecisionTree {\n");
    out.push_str("    node [shape=box, style=\"rounded,filled\", fontname=\"helvetica\"];\n");
    out.push_str("    edge [fontname=\"helvetica\"];\n");
    for (i, node) in nodes.iter().enumerate() {
        match node {
            TreeNode::Split {
                feature,
                threshold,
                counts,
                gini,
                ..
            } => {
                let name = feature_names
                    .get(*feature)
                    .cloned()
                    .unwrap_or_else(|| format!("x[{feature}]"));
                let _ = writeln!(
                    out,
                    "    n{i} [label=\"{} <= {}\\ngini = {:.4}\\nsamples = {}\\nvalue = [{}, {}]\", fillcolor=\"#ffffff\"];",
                    escape(&name),
                    threshold,
                    gini,
                    counts[0] + counts[1],
                    counts[0],
                    counts[1]
                );
            }
            TreeNode::Leaf {
                class, counts, gini, ..
            } => {
                let color = match class {
                    Class::NonFraud => "#d9ead3",
                    Class::Fraud => "#f4cccc",
                };
                let _ = writeln!(
                    out,
                    "    n{i} [label=\"v:{}\\ngini = {:.4}\\nsamples = {}\\nvalue = [{}, {}]\", fillcolor=\"{color}\"];",
                    class.index(),
                    gini,
                    counts[0] + counts[1],
                    counts[0],
                    counts[1]
                );
            }
        }
    }
    for (i, node) in nodes.iter().enumerate() {
        if let TreeNode::Split { left, right, .. } = node {
            let _ = writeln!(out, "    n{i} -> n{left} [label=\"True\"];");
            let _ = writeln!(out, "    n{i} -> n{right} [label=\"False\"];");
        }
    }
    out.push_str("}\n");
    Some(out)
}
