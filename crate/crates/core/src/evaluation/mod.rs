//! K-fold cross-validation and the results report.

mod folds;
mod report;

pub use folds::{make_folds, make_folds_unstratified, FoldPlan};
pub use report::{format_cell, render_report, EvalReport, ReportMetadata};

use serde::{Deserialize, Serialize};

use crate::classifiers::{fit, ModelKind, ModelSpec};
use crate::error::{Error, Result};
use crate::features::{Dataset, FeatureSubset};
use crate::transcript::Class;

/// Mean and sample standard deviation (n-1) of per-fold accuracies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub mean: f64,
    pub sd: f64,
}

impl Accuracy {
    pub fn of(values: &[f64]) -> Accuracy {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Accuracy { mean, sd }
    }
}

/// One (feature subset, model) result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub subset: FeatureSubset,
    pub model: ModelKind,
    pub standardized: bool,
    pub train: Accuracy,
    pub test: Accuracy,
    pub train_folds: Vec<f64>,
    pub test_folds: Vec<f64>,
    /// Fraud-class precision over all held-out predictions; `None` when
    /// nothing was predicted as fraud.
    pub precision: Option<f64>,
    /// Fraud-class recall over all held-out predictions.
    pub recall: Option<f64>,
}

fn accuracy(model: &crate::classifiers::TrainedModel, data: &Dataset) -> Result<f64> {
    let mut hits = 0;
    for r in data.rows() {
        if model.predict(&r.values)? == r.label.expect("labelled") {
            hits += 1;
        }
    }
    Ok(hits as f64 / data.len() as f64)
}

/// Runs every model spec over every fold of `plan`. Each fold fits on the
/// other folds (standardization statistics included) and scores both the
/// fitting rows and the held-out fold.
pub fn cross_validate(dataset: &Dataset, specs: &[ModelSpec], plan: &FoldPlan) -> Result<EvalReport> {
    plan.check(dataset)?;
    let mut cells = Vec::with_capacity(specs.len());
    for spec in specs {
        let mut train_folds = Vec::with_capacity(plan.k);
        let mut test_folds = Vec::with_capacity(plan.k);
        let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
        for fold in 0..plan.k {
            let wrap = |e: Error| Error::InFold {
                fold,
                source: Box::new(e),
            };
            let (train_idx, test_idx) = plan.split(fold);
            let train = dataset.select(&train_idx);
            let test = dataset.select(&test_idx);
            let model = fit(spec, &train).map_err(wrap)?;
            train_folds.push(accuracy(&model, &train).map_err(wrap)?);
            test_folds.push(accuracy(&model, &test).map_err(wrap)?);
            for r in test.rows() {
                let predicted = model.predict(&r.values).map_err(wrap)?;
                match (predicted, r.label.expect("labelled")) {
                    (Class::Fraud, Class::Fraud) => tp += 1,
                    (Class::Fraud, Class::NonFraud) => fp += 1,
                    (Class::NonFraud, Class::Fraud) => fneg += 1,
                    _ => {}
                }
            }
        }
        cells.push(ReportCell {
            subset: dataset.subset(),
            model: spec.kind,
            standardized: spec.standardize,
            train: Accuracy::of(&train_folds),
            test: Accuracy::of(&test_folds),
            train_folds,
            test_folds,
            precision: (tp + fp > 0).then(|| tp as f64 / (tp + fp) as f64),
            recall: (tp + fneg > 0).then(|| tp as f64 / (tp + fneg) as f64),
        });
    }
    Ok(EvalReport::new(ReportMetadata::from_plan(plan), cells))
}
