//! Seeded synthetic call transcripts with a controllable class signal.
//!
//! Customer responses are assembled from fixed phrase pools: an optional
//! sentiment sentence, a neutral sentence, then any injected marker phrases.
//! Neutral sentences carry no valence words, negators or injected-category
//! patterns, so the injected counts recorded in the ground-truth sidecar are
//! exactly what the marker matcher should find for those categories.
//!
//! With `signal_strength = 0` both classes draw from the same distribution;
//! at 1 fraud calls get the deception-category phrases and negative sentiment
//! at their class-specific rates.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as StatNormal};

use crate::error::{Error, Result};
use crate::transcript::{Class, Corpus, Speaker, Transcript, Turn};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkerInjection {
    pub category: String,
    /// Per-response probability shared by both classes at zero signal.
    pub neutral_rate: f64,
    pub fraud_rate: f64,
    pub non_fraud_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentBias {
    /// Probability that a response carries a sentiment sentence.
    pub rate: f64,
    /// Share of sentiment sentences that are negative, at zero signal.
    pub neutral_negative_share: f64,
    pub fraud_negative_share: f64,
    pub non_fraud_negative_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_fraud: usize,
    pub n_non_fraud: usize,
    /// Target mean / sd / range of customer responses per call.
    pub responses_mean: f64,
    pub responses_sd: f64,
    pub responses_min: usize,
    pub responses_max: usize,
    pub markers: Vec<MarkerInjection>,
    pub sentiment: SentimentBias,
    /// 0 makes the classes indistinguishable, 1 applies the class rates fully.
    pub signal_strength: f64,
    pub seed: u64,
}

fn injection(category: &str, neutral: f64, fraud: f64, non_fraud: f64) -> MarkerInjection {
    MarkerInjection {
        category: category.into(),
        neutral_rate: neutral,
        fraud_rate: fraud,
        non_fraud_rate: non_fraud,
    }
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_fraud: 32,
            n_non_fraud: 24,
            responses_mean: 19.0,
            responses_sd: 15.0,
            responses_min: 4,
            responses_max: 101,
            markers: vec![
                injection("hedging", 0.2, 0.5, 0.05),
                injection("negation", 0.2, 0.5, 0.05),
                injection("memory_loss", 0.1, 0.3, 0.0),
                injection("third_person_plural_pronouns", 0.15, 0.45, 0.02),
                injection("disfluencies", 0.25, 0.25, 0.25),
            ],
            sentiment: SentimentBias {
                rate: 0.8,
                neutral_negative_share: 0.5,
                fraud_negative_share: 1.0,
                non_fraud_negative_share: 0.0,
            },
            signal_strength: 1.0,
            seed: 7,
        }
    }
}

const PHRASES: &[(&str, &[&str])] = &[
    ("hedging", &["I guess", "sort of", "kind of", "maybe", "perhaps", "I think"]),
    ("negation", &["no", "not really", "never", "I didn't"]),
    ("memory_loss", &["I forget", "I forgot", "it slipped my mind"]),
    (
        "third_person_plural_pronouns",
        &["they called", "ask them", "their office", "they"],
    ),
    ("disfluencies", &["uh", "um", "er", "you know"]),
];

const NEUTRAL: &[&str] = &[
    "I called about my account",
    "the card ends in four two one",
    "my address is on the form",
    "I was at home on Tuesday",
    "the transfer went to my savings",
    "it was around five in the evening",
    "I opened the account last year",
    "the amount was three hundred pounds",
    "my phone number is the same",
    "I use the app for payments",
    "the branch is on the high street",
    "I moved house in March",
    "the letter came this morning",
    "my date of birth is the first of May",
    "I bank online most weeks",
];

const POSITIVE: &[&str] = &[
    "I am happy with that",
    "that is great",
    "thanks, that is lovely",
    "you have been very helpful",
    "that sounds perfect",
    "I am glad",
    "the service is excellent",
];

const NEGATIVE: &[&str] = &[
    "this is awful",
    "I am really worried",
    "it has been a terrible week",
    "I am upset about it",
    "this is a mess",
    "that is unfair",
    "I feel stressed",
];

const AGENT: &[&str] = &[
    "Can you confirm your full name?",
    "What is the reason for your call today?",
    "When did you last use the card?",
    "Could you talk me through what happened?",
    "Who else has access to the account?",
    "Can you confirm the last transaction?",
    "Is there anything else you would like to add?",
    "Where were you at the time?",
];

fn phrase_pool(category: &str) -> Option<&'static [&'static str]> {
    PHRASES.iter().find(|(c, _)| *c == category).map(|(_, p)| *p)
}

/// Categories the generator can inject.
pub fn injectable_categories() -> Vec<&'static str> {
    PHRASES.iter().map(|(c, _)| *c).collect()
}

fn lerp(neutral: f64, target: f64, s: f64) -> f64 {
    neutral + s * (target - neutral)
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n_fraud == 0 || self.n_non_fraud == 0 {
            return bad("class counts must be at least 1".into());
        }
        if self.responses_min == 0 || self.responses_min > self.responses_max {
            return bad(format!(
                "response range [{}, {}] is empty or starts at 0",
                self.responses_min, self.responses_max
            ));
        }
        if !(self.responses_sd > 0.0 && self.responses_sd.is_finite()) {
            return bad("responses_sd must be positive".into());
        }
        if !(self.responses_min as f64..=self.responses_max as f64).contains(&self.responses_mean) {
            return bad("responses_mean must lie within the response range".into());
        }
        if !(0.0..=1.0).contains(&self.signal_strength) {
            return bad(format!("signal_strength {} outside [0, 1]", self.signal_strength));
        }
        for m in &self.markers {
            if phrase_pool(&m.category).is_none() {
                return bad(format!("cannot inject category `{}`", m.category));
            }
            for r in [m.neutral_rate, m.fraud_rate, m.non_fraud_rate] {
                if !(0.0..=1.0).contains(&r) {
                    return bad(format!("rate {r} for `{}` outside [0, 1]", m.category));
                }
            }
        }
        let s = &self.sentiment;
        for r in [s.rate, s.neutral_negative_share, s.fraud_negative_share, s.non_fraud_negative_share] {
            if !(0.0..=1.0).contains(&r) {
                return bad(format!("sentiment rate {r} outside [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Location of the underlying normal so that `floor(X)`, with `X`
/// conditioned on `[min, max + 1)` and scale `sd`, has mean `mean`.
pub fn response_count_location(mean: f64, sd: f64, min: usize, max: usize) -> f64 {
    let discrete_mean = |loc: f64| -> f64 {
        let n = StatNormal::new(loc, sd).expect("valid normal");
        let (mut num, mut z) = (0.0, 0.0);
        for k in min..=max {
            let p = n.cdf((k + 1) as f64) - n.cdf(k as f64);
            num += k as f64 * p;
            z += p;
        }
        if z > 0.0 {
            num / z
        } else if loc < min as f64 {
            min as f64
        } else {
            max as f64
        }
    };
    let (mut lo, mut hi) = (min as f64 - 10.0 * sd, max as f64 + 10.0 * sd);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if discrete_mean(mid) < mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Injected per-category counts for one transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub id: String,
    pub label: Class,
    pub responses: usize,
    /// Keyed by category name, one entry per configured injection.
    pub injected: BTreeMap<String, u64>,
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub corpus: Corpus,
    pub ground_truth: Vec<GroundTruth>,
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

pub fn generate(config: &SynthConfig) -> Result<SynthCorpus> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let s = config.signal_strength;
    let n = config.n_fraud + config.n_non_fraud;

    let mut labels: Vec<Class> = std::iter::repeat_n(Class::Fraud, config.n_fraud)
        .chain(std::iter::repeat_n(Class::NonFraud, config.n_non_fraud))
        .collect();
    labels.shuffle(&mut rng);

    let loc = response_count_location(
        config.responses_mean,
        config.responses_sd,
        config.responses_min,
        config.responses_max,
    );
    let count_dist = Normal::new(loc, config.responses_sd).expect("validated sd");
    let upper = (config.responses_max + 1) as f64;
    let width = n.to_string().len().max(3);

    let mut transcripts = Vec::with_capacity(n);
    let mut truth = Vec::with_capacity(n);
    for (i, &label) in labels.iter().enumerate() {
        let id = format!("call_{:0width$}", i + 1);
        let responses = loop {
            let x: f64 = count_dist.sample(&mut rng);
            if x >= config.responses_min as f64 && x < upper {
                break x.floor() as usize;
            }
        };
        let negative_share = match label {
            Class::Fraud => lerp(
                config.sentiment.neutral_negative_share,
                config.sentiment.fraud_negative_share,
                s,
            ),
            Class::NonFraud => lerp(
                config.sentiment.neutral_negative_share,
                config.sentiment.non_fraud_negative_share,
                s,
            ),
        };
        let mut injected: BTreeMap<String, u64> =
            config.markers.iter().map(|m| (m.category.clone(), 0)).collect();
        let mut turns = Vec::with_capacity(2 * responses);
        for _ in 0..responses {
            turns.push(Turn {
                speaker: Speaker::Agent,
                text: AGENT.choose(&mut rng).expect("pool").to_string(),
            });
            let mut parts: Vec<String> = Vec::new();
            if rng.random_bool(config.sentiment.rate) {
                let pool = if rng.random_bool(negative_share) { NEGATIVE } else { POSITIVE };
                parts.push(pool.choose(&mut rng).expect("pool").to_string());
            }
            parts.push(NEUTRAL.choose(&mut rng).expect("pool").to_string());
            for m in &config.markers {
                let rate = match label {
                    Class::Fraud => lerp(m.neutral_rate, m.fraud_rate, s),
                    Class::NonFraud => lerp(m.neutral_rate, m.non_fraud_rate, s),
                };
                if rng.random_bool(rate) {
                    let pool = phrase_pool(&m.category).expect("validated");
                    parts.push(pool.choose(&mut rng).expect("pool").to_string());
                    *injected.get_mut(&m.category).expect("present") += 1;
                }
            }
            let text = parts
                .iter()
                .map(|p| format!("{}.", capitalize(p)))
                .collect::<Vec<_>>()
                .join(" ");
            turns.push(Turn {
                speaker: Speaker::Customer,
                text,
            });
        }
        truth.push(GroundTruth {
            id: id.clone(),
            label,
            responses,
            injected,
        });
        transcripts.push(Transcript::new(id, Some(label), turns));
    }
    Ok(SynthCorpus {
        corpus: Corpus::new(transcripts)?,
        ground_truth: truth,
    })
}

pub const GROUND_TRUTH_FILE: &str = "ground_truth.csv";

impl SynthCorpus {
    /// Ground truth as CSV: `id,label,responses,<category>...`.
    pub fn write_ground_truth(&self, out: impl Write) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let cats: Vec<String> = self
            .ground_truth
            .first()
            .map(|g| g.injected.keys().cloned().collect())
            .unwrap_or_default();
        let mut header = vec!["id".to_string(), "label".into(), "responses".into()];
        header.extend(cats.iter().cloned());
        wtr.write_record(&header)?;
        for g in &self.ground_truth {
            let mut rec = vec![g.id.clone(), g.label.index().to_string(), g.responses.to_string()];
            rec.extend(cats.iter().map(|c| g.injected[c].to_string()));
            wtr.write_record(&rec)?;
        }
        wtr.flush().map_err(|e| Error::io(GROUND_TRUTH_FILE, e))?;
        Ok(())
    }

    /// Writes `<id>.json` per transcript plus the ground-truth sidecar.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for t in self.corpus.transcripts() {
            let path = dir.join(format!("{}.json", t.id));
            std::fs::write(&path, t.to_document()).map_err(|e| Error::io(&path, e))?;
        }
        let path = dir.join(GROUND_TRUTH_FILE);
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        self.write_ground_truth(std::io::BufWriter::new(file))
    }
}
