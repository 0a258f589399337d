use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{FoldPlan, ReportCell};
use crate::classifiers::ModelKind;
use crate::error::{Error, Result};
use crate::features::FeatureSubset;

pub const REPORT_FORMAT: &str = "linguafraud-report";
pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub k: usize,
    pub seed: u64,
    pub stratified: bool,
    pub fold_plan_digest: String,
    pub sd_denominator: String,
    pub lexicon_version: Option<String>,
    pub sentiment_backend: Option<String>,
    pub warnings: Vec<String>,
    /// Effective run configuration, echoed by the caller.
    #[serde(default)]
    pub config: serde_json::Value,
}

impl ReportMetadata {
    pub fn from_plan(plan: &FoldPlan) -> Self {
        ReportMetadata {
            k: plan.k,
            seed: plan.seed,
            stratified: plan.stratified,
            fold_plan_digest: plan.digest(),
            sd_denominator: "sample (k - 1)".into(),
            lexicon_version: None,
            sentiment_backend: None,
            warnings: plan.warnings.clone(),
            config: serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub format: String,
    pub format_version: u32,
    pub metadata: ReportMetadata,
    /// Sorted by (feature subset, model).
    pub cells: Vec<ReportCell>,
}

impl EvalReport {
    pub fn new(metadata: ReportMetadata, mut cells: Vec<ReportCell>) -> Self {
        cells.sort_by_key(|c| (c.subset, c.model));
        EvalReport {
            format: REPORT_FORMAT.into(),
            format_version: REPORT_FORMAT_VERSION,
            metadata,
            cells,
        }
    }

    /// Adds the cells of `other`, which must come from the same fold plan.
    pub fn merge(&mut self, other: EvalReport) -> Result<()> {
        if other.metadata.fold_plan_digest != self.metadata.fold_plan_digest {
            return Err(Error::InvalidReport("reports use different fold plans".into()));
        }
        self.cells.extend(other.cells);
        self.cells.sort_by_key(|c| (c.subset, c.model));
        Ok(())
    }

    pub fn cell(&self, subset: FeatureSubset, model: ModelKind) -> Option<&ReportCell> {
        self.cells.iter().find(|c| c.subset == subset && c.model == model)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: EvalReport =
            serde_json::from_str(text).map_err(|e| Error::InvalidReport(e.to_string()))?;
        if r.format != REPORT_FORMAT || r.format_version != REPORT_FORMAT_VERSION {
            return Err(Error::InvalidReport(format!(
                "unsupported format {} v{}",
                r.format, r.format_version
            )));
        }
        Ok(r)
    }
}

/// `0.6900 ±0.13`
pub fn format_cell(mean: f64, sd: f64) -> String {
    format!("{mean:.4} \u{b1}{sd:.2}")
}

const FEATURE_COL: usize = 22;
const ACCURACY_COL: usize = 10;
const MODEL_COL: usize = 15;

fn push_row(out: &mut String, first: &str, second: &str, cells: &[String]) {
    let mut line = format!("{first:<FEATURE_COL$}{second:<ACCURACY_COL$}");
    for c in cells {
        let _ = write!(line, "{c:<MODEL_COL$}");
    }
    out.push_str(line.trim_end());
    out.push('\n');
}

/// Plain-text results grid: one block per feature subset (Markers,
/// Sentiment, Markers + Sentiment) with Training and Testing rows, one
/// column per model present in the report.
pub fn render_report(report: &EvalReport) -> String {
    let models: BTreeSet<ModelKind> = report.cells.iter().map(|c| c.model).collect();
    let subsets: BTreeSet<FeatureSubset> = report.cells.iter().map(|c| c.subset).collect();
    let mut out = String::new();
    let _ = writeln!(out, "Results of modeling with K-Fold (K={})", report.metadata.k);
    let titles: Vec<String> = models.iter().map(|m| m.title().to_string()).collect();
    push_row(&mut out, "Features", "Accuracy", &titles);
    for subset in &subsets {
        for (i, split) in ["Training", "Testing"].into_iter().enumerate() {
            let cells: Vec<String> = models
                .iter()
                .map(|&m| match report.cell(*subset, m) {
                    Some(c) if i == 0 => format_cell(c.train.mean, c.train.sd),
                    Some(c) => format_cell(c.test.mean, c.test.sd),
                    None => "-".to_string(),
                })
                .collect();
            let first = if i == 0 { subset.title() } else { "" };
            push_row(&mut out, first, split, &cells);
        }
    }
    out
}
