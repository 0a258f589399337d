//! Feature vectors, labelled datasets and the feature-matrix file.
//!
//! Canonical column order: the sixteen marker counts, then the eleven
//! sentiment statistics.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markers::{conversation_marker_features, MarkerLexicon, MARKER_COUNT, MARKER_NAMES};
use crate::sentiment::{
    aggregate_sentiment, score_response, ExternalScores, SentimentScore, ValenceLexicon,
    SENTIMENT_FEATURE_COUNT, SENTIMENT_NAMES,
};
use crate::tokenize::{tokenize, TokenStream};
use crate::transcript::{Class, Corpus, Transcript};

pub const FEATURE_COUNT: usize = MARKER_COUNT + SENTIMENT_FEATURE_COUNT;

pub fn feature_names() -> Vec<&'static str> {
    MARKER_NAMES.iter().chain(SENTIMENT_NAMES.iter()).copied().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSubset {
    Markers,
    Sentiment,
    Combined,
}

impl FeatureSubset {
    pub const ALL: [FeatureSubset; 3] = [
        FeatureSubset::Markers,
        FeatureSubset::Sentiment,
        FeatureSubset::Combined,
    ];

    /// Column range within the combined vector.
    pub fn columns(self) -> std::ops::Range<usize> {
        match self {
            FeatureSubset::Markers => 0..MARKER_COUNT,
            FeatureSubset::Sentiment => MARKER_COUNT..FEATURE_COUNT,
            FeatureSubset::Combined => 0..FEATURE_COUNT,
        }
    }

    pub fn dim(self) -> usize {
        self.columns().len()
    }

    pub fn names(self) -> Vec<&'static str> {
        feature_names()[self.columns()].to_vec()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureSubset::Markers => "markers",
            FeatureSubset::Sentiment => "sentiment",
            FeatureSubset::Combined => "combined",
        }
    }

    /// Row heading used in the results table.
    pub fn title(self) -> &'static str {
        match self {
            FeatureSubset::Markers => "Markers",
            FeatureSubset::Sentiment => "Sentiment",
            FeatureSubset::Combined => "Markers + Sentiment",
        }
    }
}

impl fmt::Display for FeatureSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureSubset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markers" => Ok(FeatureSubset::Markers),
            "sentiment" => Ok(FeatureSubset::Sentiment),
            "combined" => Ok(FeatureSubset::Combined),
            other => Err(format!(
                "unknown feature subset `{other}` (expected markers, sentiment or combined)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum SentimentBackend<'a> {
    Lexicon(&'a ValenceLexicon),
    External(&'a ExternalScores),
}

impl SentimentBackend<'_> {
    pub fn describe(&self) -> String {
        match self {
            SentimentBackend::Lexicon(l) => format!("lexicon:{}", l.version),
            SentimentBackend::External(_) => "external".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConfig {
    /// Report marker counts per 1000 customer tokens instead of raw counts.
    pub normalize_markers: bool,
}

/// One conversation: id, feature values (in the subset's column order) and
/// optional label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub id: String,
    pub values: Vec<f64>,
    pub label: Option<Class>,
}

pub fn featurize(
    transcript: &Transcript,
    lexicon: &MarkerLexicon,
    backend: SentimentBackend<'_>,
    config: FeatureConfig,
) -> Result<FeatureVector> {
    let streams: Vec<TokenStream> = transcript.customer_responses().map(tokenize).collect();
    if streams.is_empty() {
        return Err(Error::NoCustomerResponses(transcript.id.clone()));
    }
    let markers = conversation_marker_features(&streams, lexicon);
    let scores: Vec<SentimentScore> = match backend {
        SentimentBackend::Lexicon(lex) => streams.iter().map(|s| score_response(s, lex)).collect(),
        SentimentBackend::External(ext) => ext.for_transcript(&transcript.id, streams.len())?,
    };
    let stats = aggregate_sentiment(&scores)?;

    let mut values = Vec::with_capacity(FEATURE_COUNT);
    if config.normalize_markers {
        let tokens: usize = streams.iter().map(TokenStream::len).sum();
        let scale = if tokens == 0 { 0.0 } else { 1000.0 / tokens as f64 };
        values.extend(markers.iter().map(|&c| c as f64 * scale));
    } else {
        values.extend(markers.iter().map(|&c| c as f64));
    }
    values.extend(stats.to_array());
    Ok(FeatureVector {
        id: transcript.id.clone(),
        values,
        label: transcript.label,
    })
}

/// Featurizes every transcript of `corpus`, keeping corpus order.
pub fn featurize_corpus(
    corpus: &Corpus,
    lexicon: &MarkerLexicon,
    backend: SentimentBackend<'_>,
    config: FeatureConfig,
) -> Result<Vec<FeatureVector>> {
    corpus
        .transcripts()
        .iter()
        .map(|t| featurize(t, lexicon, backend, config))
        .collect()
}

/// Labelled rows sharing one feature subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    subset: FeatureSubset,
    rows: Vec<FeatureVector>,
}

impl Dataset {
    pub fn new(subset: FeatureSubset, rows: Vec<FeatureVector>) -> Result<Self> {
        let mut ids = HashSet::with_capacity(rows.len());
        for r in &rows {
            if r.label.is_none() {
                return Err(Error::UnlabeledRow(r.id.clone()));
            }
            if r.values.len() != subset.dim() {
                return Err(Error::DimensionMismatch {
                    expected: subset.dim(),
                    actual: r.values.len(),
                });
            }
            if r.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteFeature(r.id.clone()));
            }
            if !ids.insert(r.id.as_str()) {
                return Err(Error::DuplicateId(r.id.clone()));
            }
        }
        Ok(Dataset { subset, rows })
    }

    /// Rows with generated ids `r0000`, `r0001`, ... ; convenient for tests
    /// and synthetic experiments.
    pub fn from_arrays(subset: FeatureSubset, xs: &[Vec<f64>], ys: &[Class]) -> Result<Self> {
        let rows = xs
            .iter()
            .zip(ys)
            .enumerate()
            .map(|(i, (x, &y))| FeatureVector {
                id: format!("r{i:04}"),
                values: x.clone(),
                label: Some(y),
            })
            .collect();
        Self::new(subset, rows)
    }

    pub fn subset(&self) -> FeatureSubset {
        self.subset
    }

    pub fn rows(&self) -> &[FeatureVector] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.subset.dim()
    }

    pub fn feature_names(&self) -> Vec<&'static str> {
        self.subset.names()
    }

    pub fn label(&self, i: usize) -> Class {
        self.rows[i].label.expect("dataset rows are labelled")
    }

    pub fn labels(&self) -> Vec<Class> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            subset: self.subset,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn filter(&self, mut keep: impl FnMut(&FeatureVector) -> bool) -> Dataset {
        Dataset {
            subset: self.subset,
            rows: self.rows.iter().filter(|r| keep(r)).cloned().collect(),
        }
    }
}

/// Column projection of a combined dataset onto `subset`. Projecting a
/// dataset onto its own subset returns it unchanged.
pub fn project(dataset: &Dataset, subset: FeatureSubset) -> Result<Dataset> {
    if dataset.subset == subset {
        return Ok(dataset.clone());
    }
    if dataset.subset != FeatureSubset::Combined {
        return Err(Error::InvalidProjection {
            from: dataset.subset.as_str(),
            to: subset.as_str(),
        });
    }
    let cols = subset.columns();
    Ok(Dataset {
        subset,
        rows: dataset
            .rows
            .iter()
            .map(|r| FeatureVector {
                id: r.id.clone(),
                values: r.values[cols.clone()].to_vec(),
                label: r.label,
            })
            .collect(),
    })
}

/// Writes `id,<feature names>,label`, one row per vector. Labels are `0`
/// (non-fraud), `1` (fraud) or empty. Values use the shortest decimal that
/// round-trips exactly.
pub fn write_matrix(
    mut out: impl Write,
    subset: FeatureSubset,
    rows: &[FeatureVector],
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(&mut out);
    let mut header = vec!["id"];
    header.extend(subset.names());
    header.push("label");
    wtr.write_record(&header)?;
    for r in rows {
        if r.values.len() != subset.dim() {
            return Err(Error::DimensionMismatch {
                expected: subset.dim(),
                actual: r.values.len(),
            });
        }
        let mut rec = Vec::with_capacity(subset.dim() + 2);
        rec.push(r.id.clone());
        rec.extend(r.values.iter().map(|v| v.to_string()));
        rec.push(r.label.map(|c| c.index().to_string()).unwrap_or_default());
        wtr.write_record(&rec)?;
    }
    wtr.flush().map_err(|e| Error::io("<matrix>", e))?;
    Ok(())
}

/// Reads a matrix written by [`write_matrix`]. The header must match one of
/// the three canonical subsets exactly.
pub fn read_matrix(input: impl Read) -> Result<(FeatureSubset, Vec<FeatureVector>)> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let subset = FeatureSubset::ALL
        .into_iter()
        .find(|s| {
            let names = s.names();
            header.len() == names.len() + 2
                && header[0] == "id"
                && header[header.len() - 1] == "label"
                && header[1..header.len() - 1].iter().zip(&names).all(|(a, b)| a == b)
        })
        .ok_or_else(|| Error::InvalidMatrix("header does not match a known feature subset".into()))?;
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let bad = |what: &str| Error::InvalidMatrix(format!("row {}: {what}", line + 1));
        let values = (1..rec.len() - 1)
            .map(|i| rec[i].trim().parse::<f64>().map_err(|_| bad(&format!("bad value `{}`", &rec[i]))))
            .collect::<Result<Vec<_>>>()?;
        let label = match rec[rec.len() - 1].trim() {
            "" => None,
            l => Some(
                l.parse::<usize>()
                    .ok()
                    .and_then(Class::from_index)
                    .ok_or_else(|| bad(&format!("bad label `{l}`")))?,
            ),
        };
        rows.push(FeatureVector {
            id: rec[0].to_string(),
            values,
            label,
        });
    }
    Ok((subset, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transcript::{Speaker, Turn};

    fn transcript(responses: &[&str]) -> Transcript {
        let mut turns = Vec::new();
        for r in responses {
            turns.push(Turn {
                speaker: Speaker::Agent,
                text: "Could you explain that?".into(),
            });
            turns.push(Turn {
                speaker: Speaker::Customer,
                text: (*r).into(),
            });
        }
        Transcript::new("t1", Some(Class::Fraud), turns)
    }

    fn run(t: &Transcript) -> Result<FeatureVector> {
        featurize(
            t,
            &MarkerLexicon::default_lexicon(),
            SentimentBackend::Lexicon(&ValenceLexicon::default_lexicon()),
            FeatureConfig::default(),
        )
    }

    #[test]
    fn null_signal() {
        let v = run(&transcript(&["account seven"])).unwrap();
        assert_eq!(v.values.len(), FEATURE_COUNT);
        assert!(v.values[..16].iter().all(|&x| x == 0.0));
        assert_eq!(&v.values[16..], &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn four_responses() {
        let v = run(&transcript(&["yes", "no", "the card", "later on"])).unwrap();
        assert_eq!(v.values[FEATURE_COUNT - 1], 4.0);
    }

    #[test]
    fn composition() {
        let lex = MarkerLexicon::default_lexicon();
        let val = ValenceLexicon::default_lexicon();
        let t = transcript(&["I guess they were upset", "Honestly, I am happy", "um"]);
        let v = run(&t).unwrap();
        let streams: Vec<_> = t.customer_responses().map(tokenize).collect();
        let markers = conversation_marker_features(&streams, &lex);
        let stats = aggregate_sentiment(
            &streams.iter().map(|s| score_response(s, &val)).collect::<Vec<_>>(),
        )
        .unwrap();
        let m: Vec<f64> = markers.iter().map(|&c| c as f64).collect();
        assert_eq!(&v.values[..16], &m[..]);
        assert_eq!(&v.values[16..], &stats.to_array()[..]);
    }

    #[test]
    fn no_customer_responses() {
        let t = Transcript::new("x", None, vec![]);
        assert!(matches!(run(&t), Err(Error::NoCustomerResponses(_))));
    }

    #[test]
    fn normalized_markers() {
        let t = transcript(&["because because a b"]);
        let v = featurize(
            &t,
            &MarkerLexicon::default_lexicon(),
            SentimentBackend::Lexicon(&ValenceLexicon::default_lexicon()),
            FeatureConfig {
                normalize_markers: true,
            },
        )
        .unwrap();
        assert_eq!(v.values[0], 500.0);
    }

    #[test]
    fn projection() {
        let xs: Vec<Vec<f64>> = (0..4).map(|i| (0..27).map(|j| (i * 27 + j) as f64).collect()).collect();
        let ys = [Class::Fraud, Class::NonFraud, Class::Fraud, Class::NonFraud];
        let d = Dataset::from_arrays(FeatureSubset::Combined, &xs, &ys).unwrap();
        let m = project(&d, FeatureSubset::Markers).unwrap();
        assert_eq!(m.dim(), 16);
        assert_eq!(m.rows()[1].values[0], 27.0);
        let s = project(&d, FeatureSubset::Sentiment).unwrap();
        assert_eq!(s.dim(), 11);
        assert_eq!(s.rows()[0].values[0], 16.0);
        assert_eq!(s.labels(), ys);
        assert_eq!(project(&m, FeatureSubset::Markers).unwrap(), m);
        assert!(project(&m, FeatureSubset::Sentiment).is_err());
    }

    #[test]
    fn dataset_validation() {
        let ys = [Class::Fraud];
        assert!(Dataset::from_arrays(FeatureSubset::Markers, &[vec![0.0; 3]], &ys).is_err());
        assert!(Dataset::from_arrays(FeatureSubset::Markers, &[vec![f64::NAN; 16]], &ys).is_err());
        let unlabeled = FeatureVector {
            id: "u".into(),
            values: vec![0.0; 16],
            label: None,
        };
        assert!(matches!(
            Dataset::new(FeatureSubset::Markers, vec![unlabeled]),
            Err(Error::UnlabeledRow(_))
        ));
    }
}
