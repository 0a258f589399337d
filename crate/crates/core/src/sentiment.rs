//! Per-response sentiment scoring and per-conversation sentiment statistics.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tokenize::TokenStream;
use crate::transcript::Corpus;

const DEFAULT_VALENCE: &str = include_str!("../data/valence-v1.json");

/// Polarity in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SentimentScore(f64);

impl SentimentScore {
    pub fn new(value: f64) -> Option<Self> {
        (-1.0..=1.0).contains(&value).then_some(SentimentScore(value))
    }

    pub fn clamped(value: f64) -> Self {
        SentimentScore(value.clamp(-1.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValenceLexicon {
    pub version: String,
    pub negation_window: usize,
    pub negators: Vec<String>,
    pub entries: BTreeMap<String, f64>,
    #[serde(skip)]
    negator_set: HashSet<String>,
    #[serde(skip)]
    lookup: HashMap<String, f64>,
}

impl ValenceLexicon {
    pub fn new(
        version: impl Into<String>,
        entries: BTreeMap<String, f64>,
        negators: Vec<String>,
        negation_window: usize,
    ) -> Result<Self> {
        if let Some((tok, v)) = entries.iter().find(|(_, v)| !(-1.0..=1.0).contains(*v)) {
            return Err(Error::InvalidValenceLexicon(format!(
                "valence {v} for `{tok}` is outside [-1, 1]"
            )));
        }
        if let Some(n) = negators.iter().find(|n| entries.contains_key(*n)) {
            return Err(Error::InvalidValenceLexicon(format!(
                "`{n}` is both a negator and a valence entry"
            )));
        }
        Ok(ValenceLexicon {
            version: version.into(),
            negation_window,
            negator_set: negators.iter().cloned().collect(),
            lookup: entries.iter().map(|(k, v)| (k.clone(), *v)).collect(),
            negators,
            entries,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ValenceLexicon = serde_json::from_str(text)
            .map_err(|e| Error::InvalidValenceLexicon(e.to_string()))?;
        Self::new(raw.version, raw.entries, raw.negators, raw.negation_window)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::in_file(path, e))
    }

    /// The valence lexicon shipped with the crate (`valence-v1`, window 3).
    pub fn default_lexicon() -> Self {
        Self::from_json(DEFAULT_VALENCE).expect("bundled valence lexicon is valid")
    }

    pub fn valence(&self, token: &str) -> Option<f64> {
        self.lookup.get(token).copied()
    }

    pub fn is_negator(&self, token: &str) -> bool {
        self.negator_set.contains(token)
    }

    /// Valence of each matched token after negation, as `(token index, value)`.
    pub fn adjusted_valences(&self, stream: &TokenStream) -> Vec<(usize, f64)> {
        let toks = &stream.tokens;
        toks.iter()
            .enumerate()
            .filter_map(|(i, t)| {
                let v = self.valence(t)?;
                let from = i.saturating_sub(self.negation_window);
                let negated = toks[from..i].iter().any(|p| self.is_negator(p));
                Some((i, if negated { -v } else { v }))
            })
            .collect()
    }
}

/// Mean of the negation-adjusted valences of the matched tokens, clamped to
/// `[-1, 1]`; 0 when nothing matches.
pub fn score_response(stream: &TokenStream, lex: &ValenceLexicon) -> SentimentScore {
    let adjusted = lex.adjusted_valences(stream);
    if adjusted.is_empty() {
        return SentimentScore(0.0);
    }
    let sum: f64 = adjusted.iter().map(|(_, v)| v).sum();
    SentimentScore::clamped(sum / adjusted.len() as f64)
}

/// Precomputed per-response scores keyed by `(transcript id, response index)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExternalScores {
    scores: BTreeMap<(String, usize), SentimentScore>,
}

impl ExternalScores {
    pub fn get(&self, id: &str, index: usize) -> Option<SentimentScore> {
        self.scores.get(&(id.to_string(), index)).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Scores for every customer response of `id`, in order.
    pub fn for_transcript(&self, id: &str, responses: usize) -> Result<Vec<SentimentScore>> {
        (0..responses)
            .map(|index| {
                self.get(id, index).ok_or_else(|| Error::MissingResponseScore {
                    id: id.to_string(),
                    index,
                })
            })
            .collect()
    }
}

/// Reads comma-separated rows `transcript_id,response_index,score` and
/// checks them against `corpus`: every customer response of every transcript
/// must have exactly one score. A leading header row is tolerated.
pub fn load_external_scores(reader: impl Read, corpus: &Corpus) -> Result<ExternalScores> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut scores = BTreeMap::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != 3 {
            return Err(Error::MalformedDocument(format!(
                "score row {}: expected 3 fields, got {}",
                line + 1,
                record.len()
            )));
        }
        let (id, index, score) = (&record[0], &record[1], &record[2]);
        if line == 0 && index.parse::<usize>().is_err() && score.parse::<f64>().is_err() {
            continue;
        }
        let index: usize = index.parse().map_err(|_| {
            Error::MalformedDocument(format!("score row {}: bad index `{index}`", line + 1))
        })?;
        let score: f64 = score.parse().map_err(|_| {
            Error::MalformedDocument(format!("score row {}: bad score `{score}`", line + 1))
        })?;
        let transcript = corpus
            .get(id)
            .ok_or_else(|| Error::UnknownTranscript(id.to_string()))?;
        let responses = transcript.customer_response_count();
        if index >= responses {
            return Err(Error::ResponseIndexOutOfRange {
                id: id.to_string(),
                index,
                responses,
            });
        }
        let value = SentimentScore::new(score).ok_or_else(|| Error::OutOfRangeScore {
            id: id.to_string(),
            index,
            score,
        })?;
        if scores.insert((id.to_string(), index), value).is_some() {
            return Err(Error::DuplicateScore {
                id: id.to_string(),
                index,
            });
        }
    }
    let out = ExternalScores { scores };
    for t in corpus.transcripts() {
        out.for_transcript(&t.id, t.customer_response_count())?;
    }
    Ok(out)
}

pub fn load_external_scores_path(path: impl AsRef<Path>, corpus: &Corpus) -> Result<ExternalScores> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    load_external_scores(file, corpus).map_err(|e| Error::in_file(path, e))
}

pub const SENTIMENT_FEATURE_COUNT: usize = 11;

pub const SENTIMENT_NAMES: [&str; SENTIMENT_FEATURE_COUNT] = [
    "sentiment_mean",
    "sentiment_sd",
    "sentiment_min",
    "sentiment_max",
    "sentiment_median",
    "sentiment_iqr",
    "sentiment_kurtosis",
    "sentiment_skewness",
    "sentiment_pe",
    "sentiment_ne",
    "sentiment_tr",
];

/// Summary of one conversation's response scores.
///
/// `sd` uses the n-1 denominator, quantiles interpolate linearly between
/// order statistics, skewness and kurtosis are the population-moment
/// `g1 = m3 / m2^1.5` and excess `m4 / m2^2 - 3`. Both are 0 when all
/// scores are equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentStats {
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    pub iqr: f64,
    pub kurtosis: f64,
    pub skewness: f64,
    pub positive_energy: f64,
    pub negative_energy: f64,
    pub responses: usize,
}

impl SentimentStats {
    pub fn to_array(&self) -> [f64; SENTIMENT_FEATURE_COUNT] {
        [
            self.mean,
            self.sd,
            self.min,
            self.max,
            self.median,
            self.iqr,
            self.kurtosis,
            self.skewness,
            self.positive_energy,
            self.negative_energy,
            self.responses as f64,
        ]
    }
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn aggregate_sentiment(scores: &[SentimentScore]) -> Result<SentimentStats> {
    if scores.is_empty() {
        return Err(Error::EmptyScoreList);
    }
    let mut xs: Vec<f64> = scores.iter().map(|s| s.value()).collect();
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    let nf = n as f64;
    let (min, max) = (xs[0], xs[n - 1]);
    let mean = xs.iter().sum::<f64>() / nf;
    let median = if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    };

    let (sd, skewness, kurtosis) = if min == max {
        (0.0, 0.0, 0.0)
    } else {
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        for &x in &xs {
            let d = x - mean;
            let d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        let sd = if n > 1 { (m2 / (nf - 1.0)).sqrt() } else { 0.0 };
        let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
        (sd, m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
    };

    let iqr = quantile_sorted(&xs, 0.75) - quantile_sorted(&xs, 0.25);
    let positive_energy = xs.iter().map(|&s| s.max(0.0)).sum();
    let negative_energy = xs.iter().map(|&s| (-s).max(0.0)).sum();

    Ok(SentimentStats {
        mean,
        sd,
        min,
        max,
        median,
        iqr,
        kurtosis,
        skewness,
        positive_energy,
        negative_energy,
        responses: n,
    })
}
