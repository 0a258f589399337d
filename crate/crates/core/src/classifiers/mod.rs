//! The four explainable classifiers behind one train/predict contract.
//!
//! | kind            | hyperparameters             | scaling (default) |
//! |-----------------|-----------------------------|-------------------|
//! | Gaussian NB     | smoothing 1e-9 x max var    | raw               |
//! | decision tree   | Gini, max depth 3           | raw               |
//! | k-NN            | k = 3, Euclidean            | z-score           |
//! | linear SVM      | C = 1, tolerance 1e-6       | z-score           |
//!
//! z-scoring is fitted on the training rows passed to [`fit`] and stored in
//! the model, so prediction applies exactly the same transform.

mod explain;
pub mod knn;
pub mod naive_bayes;
pub mod standardize;
pub mod svm;
pub mod tree;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{Dataset, FeatureSubset};
use crate::transcript::Class;

pub use explain::{
    export_explanation, render_tree, trace_prediction, Explanation, NbFeatureTable, WeightEntry,
};
pub use knn::{KnnModel, Neighbor};
pub use naive_bayes::GaussianNb;
pub use standardize::Standardizer;
pub use svm::LinearSvm;
pub use tree::{DecisionTree, TreeNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    NaiveBayes,
    DecisionTree,
    Knn,
    LinearSvm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::NaiveBayes,
        ModelKind::DecisionTree,
        ModelKind::Knn,
        ModelKind::LinearSvm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::NaiveBayes => "nb",
            ModelKind::DecisionTree => "tree",
            ModelKind::Knn => "knn",
            ModelKind::LinearSvm => "svm",
        }
    }

    /// Column heading used in the results table.
    pub fn title(self) -> &'static str {
        match self {
            ModelKind::NaiveBayes => "Naive Bayes",
            ModelKind::DecisionTree => "DTree (d=3)",
            ModelKind::Knn => "kNN(k=3)",
            ModelKind::LinearSvm => "SVM(Linear)",
        }
    }

    pub fn standardizes_by_default(self) -> bool {
        matches!(self, ModelKind::Knn | ModelKind::LinearSvm)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nb" | "naive_bayes" => Ok(ModelKind::NaiveBayes),
            "tree" | "dtree" | "decision_tree" => Ok(ModelKind::DecisionTree),
            "knn" => Ok(ModelKind::Knn),
            "svm" | "linear_svm" => Ok(ModelKind::LinearSvm),
            other => Err(format!("unknown model `{other}` (expected nb, tree, knn or svm)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub standardize: bool,
}

impl ModelSpec {
    pub fn new(kind: ModelKind) -> Self {
        ModelSpec {
            kind,
            standardize: kind.standardizes_by_default(),
        }
    }

    pub fn with_standardize(mut self, on: bool) -> Self {
        self.standardize = on;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelParams {
    NaiveBayes(GaussianNb),
    DecisionTree(DecisionTree),
    Knn(KnnModel),
    LinearSvm(LinearSvm),
}

pub const MODEL_FORMAT: &str = "linguafraud-model";
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// A fitted model plus everything needed to reproduce its predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub format: String,
    pub format_version: u32,
    pub kind: ModelKind,
    pub subset: FeatureSubset,
    pub feature_names: Vec<String>,
    pub standardizer: Option<Standardizer>,
    /// Marker lexicon version the features were extracted with.
    pub lexicon_version: Option<String>,
    /// Sentiment backend the features were extracted with.
    pub sentiment_backend: Option<String>,
    pub training_rows: usize,
    pub params: ModelParams,
}

pub fn fit(spec: &ModelSpec, dataset: &Dataset) -> Result<TrainedModel> {
    if dataset.is_empty() {
        return Err(Error::EmptyTraining);
    }
    let ys = dataset.labels();
    if !ys.contains(&Class::Fraud) || !ys.contains(&Class::NonFraud) {
        return Err(Error::SingleClassTraining);
    }
    let standardizer = spec.standardize.then(|| {
        let raw: Vec<&[f64]> = dataset.rows().iter().map(|r| r.values.as_slice()).collect();
        Standardizer::fit(&raw)
    });
    let rows: Vec<Vec<f64>> = dataset
        .rows()
        .iter()
        .map(|r| match &standardizer {
            Some(s) => s.transform(&r.values),
            None => r.values.clone(),
        })
        .collect();
    let xs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();

    let params = match spec.kind {
        ModelKind::NaiveBayes => ModelParams::NaiveBayes(GaussianNb::fit(&xs, &ys)),
        ModelKind::DecisionTree => {
            ModelParams::DecisionTree(DecisionTree::fit(&xs, &ys, DecisionTree::DEFAULT_MAX_DEPTH))
        }
        ModelKind::Knn => ModelParams::Knn(KnnModel::fit(
            dataset.rows().iter().map(|r| r.id.clone()).collect(),
            rows.clone(),
            ys.clone(),
            KnnModel::DEFAULT_K,
        )),
        ModelKind::LinearSvm => ModelParams::LinearSvm(LinearSvm::fit(
            &xs,
            &ys,
            LinearSvm::DEFAULT_C,
            LinearSvm::DEFAULT_TOLERANCE,
            LinearSvm::DEFAULT_MAX_ITERATIONS,
        )),
    };

    Ok(TrainedModel {
        format: MODEL_FORMAT.to_string(),
        format_version: MODEL_FORMAT_VERSION,
        kind: spec.kind,
        subset: dataset.subset(),
        feature_names: dataset.feature_names().iter().map(|s| s.to_string()).collect(),
        standardizer,
        lexicon_version: None,
        sentiment_backend: None,
        training_rows: dataset.len(),
        params,
    })
}

impl TrainedModel {
    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    /// The row in model space (standardized when the model was).
    pub fn prepare(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: row.len(),
            });
        }
        Ok(match &self.standardizer {
            Some(s) => s.transform(row),
            None => row.to_vec(),
        })
    }

    pub fn predict(&self, row: &[f64]) -> Result<Class> {
        let x = self.prepare(row)?;
        Ok(match &self.params {
            ModelParams::NaiveBayes(m) => m.predict(&x),
            ModelParams::DecisionTree(m) => m.predict(&x),
            ModelParams::Knn(m) => m.predict(&x),
            ModelParams::LinearSvm(m) => m.predict(&x),
        })
    }

    pub fn with_provenance(mut self, lexicon_version: Option<String>, sentiment_backend: Option<String>) -> Self {
        self.lexicon_version = lexicon_version;
        self.sentiment_backend = sentiment_backend;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: TrainedModel =
            serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))?;
        if m.format != MODEL_FORMAT {
            return Err(Error::InvalidModel(format!("unexpected format `{}`", m.format)));
        }
        if m.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::InvalidModel(format!(
                "unsupported format version {}",
                m.format_version
            )));
        }
        if m.feature_names.len() != m.subset.dim() {
            return Err(Error::InvalidModel("feature names do not match subset".into()));
        }
        Ok(m)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::in_file(path, e))
    }
}

pub fn predict(model: &TrainedModel, row: &[f64]) -> Result<Class> {
    model.predict(row)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_points() -> Dataset {
        let mut a = vec![0.0; 16];
        let mut b = vec![0.0; 16];
        a[2] = 1.0;
        b[2] = 5.0;
        b[7] = 2.0;
        Dataset::from_arrays(FeatureSubset::Markers, &[a, b], &[Class::NonFraud, Class::Fraud])
            .unwrap()
    }

    #[test]
    fn separable_pair_fits_every_model() {
        let d = two_points();
        for kind in ModelKind::ALL {
            let m = fit(&ModelSpec::new(kind), &d).unwrap();
            for r in d.rows() {
                assert_eq!(m.predict(&r.values).unwrap(), r.label.unwrap(), "{kind}");
            }
        }
    }

    #[test]
    fn single_class_rejected() {
        let d = Dataset::from_arrays(
            FeatureSubset::Markers,
            &[vec![0.0; 16], vec![1.0; 16]],
            &[Class::Fraud, Class::Fraud],
        )
        .unwrap();
        assert!(matches!(
            fit(&ModelSpec::new(ModelKind::NaiveBayes), &d),
            Err(Error::SingleClassTraining)
        ));
    }

    #[test]
    fn dimension_checked() {
        let m = fit(&ModelSpec::new(ModelKind::LinearSvm), &two_points()).unwrap();
        assert!(matches!(
            m.predict(&[0.0; 3]),
            Err(Error::DimensionMismatch { expected: 16, actual: 3 })
        ));
    }

    #[test]
    fn model_file_round_trip() {
        let d = two_points();
        for kind in ModelKind::ALL {
            let m = fit(&ModelSpec::new(kind), &d)
                .unwrap()
                .with_provenance(Some("markers-v1".into()), Some("lexicon:valence-v1".into()));
            let back = TrainedModel::from_json(&m.to_json()).unwrap();
            assert_eq!(back, m);
            assert_eq!(back.to_json(), m.to_json());
        }
        assert!(TrainedModel::from_json("{}").is_err());
    }

    #[test]
    fn kind_parsing() {
        for kind in ModelKind::ALL {
            assert_eq!(kind.as_str().parse::<ModelKind>().unwrap(), kind);
        }
        assert!("forest".parse::<ModelKind>().is_err());
    }
}
