//! Run settings: command-line flags over a JSON config file over defaults.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use linguafraud::prelude::*;
use linguafraud::synth::SynthConfig;
use linguafraud::{Error, Result};

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_K: usize = 10;

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// JSON file with defaults for any of these flags
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Marker lexicon (JSON); the bundled markers-v1 when omitted
    #[arg(long, value_name = "PATH")]
    pub lexicon: Option<PathBuf>,
    /// Valence lexicon (JSON); the bundled valence-v1 when omitted
    #[arg(long, value_name = "PATH")]
    pub valence: Option<PathBuf>,
    /// `lexicon` or `external:<scores.csv>`
    #[arg(long, value_name = "BACKEND")]
    pub sentiment: Option<String>,
    /// Comma-separated: markers, sentiment, combined
    #[arg(long, value_name = "LIST")]
    pub features: Option<String>,
    /// Comma-separated: nb, tree, knn, svm
    #[arg(long, value_name = "LIST")]
    pub models: Option<String>,
    /// Number of cross-validation folds [default: 10]
    #[arg(long)]
    pub k: Option<usize>,
    /// Seed for folds and synthetic data [default: 7]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override per-model standardization
    #[arg(long, value_parser = ["on", "off"])]
    pub standardize: Option<String>,
    /// Marker counts per 1000 customer tokens
    #[arg(long)]
    pub normalize_markers: bool,
    /// Output file, or directory for evaluate and synth
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    lexicon: Option<PathBuf>,
    valence: Option<PathBuf>,
    sentiment: Option<String>,
    features: Option<String>,
    models: Option<String>,
    k: Option<usize>,
    seed: Option<u64>,
    standardize: Option<String>,
    normalize_markers: Option<bool>,
    synth: Option<SynthConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SentimentChoice {
    Lexicon,
    External(PathBuf),
}

/// What the run actually uses; serialized into output metadata.
#[derive(Debug, Clone, Serialize)]
pub struct Effective {
    pub lexicon: String,
    pub lexicon_version: String,
    pub valence: String,
    pub valence_version: String,
    pub sentiment: String,
    pub features: Option<Vec<String>>,
    pub models: Vec<String>,
    pub k: usize,
    pub seed: u64,
    pub standardize: String,
    pub normalize_markers: bool,
}

pub struct Settings {
    pub lexicon: MarkerLexicon,
    pub valence: ValenceLexicon,
    pub sentiment: SentimentChoice,
    pub features: Option<Vec<FeatureSubset>>,
    pub models: Vec<ModelKind>,
    pub k: usize,
    pub seed: u64,
    pub standardize: Option<bool>,
    pub normalize_markers: bool,
    pub out: Option<PathBuf>,
    pub synth: SynthConfig,
    pub effective: Effective,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

fn parse_list<T>(text: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>>
where
    T: PartialEq,
{
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v = parse(item).ok_or_else(|| bad(format!("unknown {what} `{item}`")))?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(bad(format!("empty {what} list")));
    }
    Ok(out)
}

fn parse_sentiment(s: &str) -> Result<SentimentChoice> {
    match s {
        "lexicon" => Ok(SentimentChoice::Lexicon),
        _ => match s.strip_prefix("external:") {
            Some(p) if !p.is_empty() => Ok(SentimentChoice::External(PathBuf::from(p))),
            _ => Err(bad(format!("sentiment backend must be `lexicon` or `external:<path>`, got `{s}`"))),
        },
    }
}

fn parse_toggle(s: &str) -> Result<bool> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(bad(format!("standardize must be on or off, got `{s}`"))),
    }
}

fn rebase(base: Option<&Path>, p: PathBuf) -> PathBuf {
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    }
}

impl Settings {
    pub fn resolve(args: &CommonArgs) -> Result<Settings> {
        let (file, base) = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                let file: ConfigFile = serde_json::from_str(&text)
                    .map_err(|e| Error::in_file(path, bad(e.to_string())))?;
                (file, path.parent().map(Path::to_path_buf))
            }
            None => (ConfigFile::default(), None),
        };
        let base = base.as_deref();

        let lexicon_path = args.lexicon.clone().or_else(|| file.lexicon.clone().map(|p| rebase(base, p)));
        let (lexicon, lexicon_src) = match &lexicon_path {
            Some(p) => (MarkerLexicon::from_path(p)?, p.display().to_string()),
            None => (MarkerLexicon::default_lexicon(), "bundled".to_string()),
        };
        let valence_path = args.valence.clone().or_else(|| file.valence.clone().map(|p| rebase(base, p)));
        let (valence, valence_src) = match &valence_path {
            Some(p) => (ValenceLexicon::from_path(p)?, p.display().to_string()),
            None => (ValenceLexicon::default_lexicon(), "bundled".to_string()),
        };
        let sentiment = match (&args.sentiment, &file.sentiment) {
            (Some(s), _) => parse_sentiment(s)?,
            (None, Some(s)) => match parse_sentiment(s)? {
                SentimentChoice::External(p) => SentimentChoice::External(rebase(base, p)),
                other => other,
            },
            (None, None) => SentimentChoice::Lexicon,
        };
        if let SentimentChoice::External(p) = &sentiment {
            if !p.is_file() {
                return Err(Error::io(p, std::io::Error::from(std::io::ErrorKind::NotFound)));
            }
        }
        let features = args
            .features
            .as_deref()
            .or(file.features.as_deref())
            .map(|s| parse_list(s, "feature set", |x| x.parse::<FeatureSubset>().ok()))
            .transpose()?;
        let models = match args.models.as_deref().or(file.models.as_deref()) {
            Some(s) => parse_list(s, "model", |x| x.parse::<ModelKind>().ok())?,
            None => ModelKind::ALL.to_vec(),
        };
        let k = args.k.or(file.k).unwrap_or(DEFAULT_K);
        let seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
        let standardize = args
            .standardize
            .as_deref()
            .or(file.standardize.as_deref())
            .map(parse_toggle)
            .transpose()?;
        let normalize_markers = args.normalize_markers || file.normalize_markers.unwrap_or(false);
        let mut synth = file.synth.clone().unwrap_or_default();
        if let Some(s) = args.seed.or(file.seed) {
            synth.seed = s;
        }

        let effective = Effective {
            lexicon: lexicon_src,
            lexicon_version: lexicon.version().to_string(),
            valence: valence_src,
            valence_version: valence.version.clone(),
            sentiment: match &sentiment {
                SentimentChoice::Lexicon => "lexicon".into(),
                SentimentChoice::External(p) => format!("external:{}", p.display()),
            },
            features: features
                .as_ref()
                .map(|f| f.iter().map(|s| s.as_str().to_string()).collect()),
            models: models.iter().map(|m| m.as_str().to_string()).collect(),
            k,
            seed,
            standardize: match standardize {
                Some(true) => "on".into(),
                Some(false) => "off".into(),
                None => "model default".into(),
            },
            normalize_markers,
        };
        Ok(Settings {
            lexicon,
            valence,
            sentiment,
            features,
            models,
            k,
            seed,
            standardize,
            normalize_markers,
            out: args.out.clone(),
            synth,
            effective,
        })
    }

    pub fn feature_config(&self) -> FeatureConfig {
        FeatureConfig {
            normalize_markers: self.normalize_markers,
        }
    }

    pub fn specs(&self) -> Vec<ModelSpec> {
        self.models
            .iter()
            .map(|&m| {
                let spec = ModelSpec::new(m);
                match self.standardize {
                    Some(on) => spec.with_standardize(on),
                    None => spec,
                }
            })
            .collect()
    }

    pub fn effective_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.effective).expect("config serializes")
    }
}
