use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use linguafraud::features::{read_matrix, write_matrix, FeatureVector};
use linguafraud::prelude::*;
use linguafraud::sentiment::{load_external_scores_path, ExternalScores};
use linguafraud::synth::SynthConfig;
use linguafraud::{Error, Result};

use crate::config::{SentimentChoice, Settings};

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

/// Sidecar written next to a feature matrix.
#[derive(Debug, Serialize, Deserialize)]
struct MatrixMeta {
    format: String,
    subset: FeatureSubset,
    lexicon_version: String,
    sentiment_backend: String,
    config: serde_json::Value,
}

const MATRIX_META_FORMAT: &str = "linguafraud-matrix-meta";

fn meta_path(matrix: &Path) -> PathBuf {
    let mut s = matrix.as_os_str().to_os_string();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn sentiment_scores(settings: &Settings, corpus: &Corpus) -> Result<Option<ExternalScores>> {
    match &settings.sentiment {
        SentimentChoice::Lexicon => Ok(None),
        SentimentChoice::External(p) => Ok(Some(load_external_scores_path(p, corpus)?)),
    }
}

fn backend<'a>(settings: &'a Settings, ext: &'a Option<ExternalScores>) -> SentimentBackend<'a> {
    match ext {
        Some(e) => SentimentBackend::External(e),
        None => SentimentBackend::Lexicon(&settings.valence),
    }
}

fn load_nonempty_corpus(path: &Path) -> Result<Corpus> {
    let corpus = load_corpus(path)?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(corpus)
}

fn slice(rows: Vec<FeatureVector>, subset: FeatureSubset) -> Vec<FeatureVector> {
    let cols = subset.columns();
    rows.into_iter()
        .map(|r| FeatureVector {
            values: r.values[cols.clone()].to_vec(),
            ..r
        })
        .collect()
}

fn class_summary(rows: &[FeatureVector]) -> String {
    let c = linguafraud::transcript::ClassCounts::of(rows.iter().map(|r| r.label));
    format!(
        "{} rows (fraud {}, non_fraud {}, unlabeled {})",
        rows.len(),
        c.fraud,
        c.non_fraud,
        c.unlabeled
    )
}

pub fn extract(corpus_path: &Path, settings: &Settings) -> Result<()> {
    let subset = match settings.features.as_deref() {
        None => FeatureSubset::Combined,
        Some([one]) => *one,
        Some(_) => return Err(usage("extract writes one feature set; pass a single --features value")),
    };
    let corpus = load_nonempty_corpus(corpus_path)?;
    let ext = sentiment_scores(settings, &corpus)?;
    let be = backend(settings, &ext);
    let rows = featurize_corpus(&corpus, &settings.lexicon, be, settings.feature_config())?;
    let rows = slice(rows, subset);
    let mut buf = Vec::new();
    write_matrix(&mut buf, subset, &rows)?;
    match &settings.out {
        Some(path) => {
            write_file(path, &buf)?;
            let meta = MatrixMeta {
                format: MATRIX_META_FORMAT.into(),
                subset,
                lexicon_version: settings.lexicon.version().to_string(),
                sentiment_backend: be.describe(),
                config: settings.effective_json(),
            };
            let mut text = serde_json::to_string_pretty(&meta).expect("meta serializes");
            text.push('\n');
            write_file(&meta_path(path), text)?;
            println!("wrote {}: {}", path.display(), class_summary(&rows));
        }
        None => {
            std::io::stdout()
                .write_all(&buf)
                .map_err(|e| Error::io("<stdout>", e))?;
            eprintln!("{}", class_summary(&rows));
        }
    }
    Ok(())
}

struct Loaded {
    rows: Vec<FeatureVector>,
    subset: FeatureSubset,
    lexicon_version: Option<String>,
    sentiment_backend: Option<String>,
}

fn is_matrix(path: &Path) -> bool {
    path.is_file() && path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn load_rows(input: &Path, settings: &Settings) -> Result<Loaded> {
    if is_matrix(input) {
        let file = fs::File::open(input).map_err(|e| Error::io(input, e))?;
        let (subset, rows) = read_matrix(file).map_err(|e| Error::in_file(input, e))?;
        let meta_file = meta_path(input);
        let meta: Option<MatrixMeta> = match fs::read_to_string(&meta_file) {
            Ok(text) => Some(
                serde_json::from_str(&text)
                    .map_err(|e| Error::in_file(&meta_file, Error::MalformedDocument(e.to_string())))?,
            ),
            Err(_) => None,
        };
        return Ok(Loaded {
            rows,
            subset,
            lexicon_version: meta.as_ref().map(|m| m.lexicon_version.clone()),
            sentiment_backend: meta.map(|m| m.sentiment_backend),
        });
    }
    let corpus = load_nonempty_corpus(input)?;
    let ext = sentiment_scores(settings, &corpus)?;
    let be = backend(settings, &ext);
    let rows = featurize_corpus(&corpus, &settings.lexicon, be, settings.feature_config())?;
    Ok(Loaded {
        rows,
        subset: FeatureSubset::Combined,
        lexicon_version: Some(settings.lexicon.version().to_string()),
        sentiment_backend: Some(be.describe()),
    })
}

pub fn evaluate(input: &Path, settings: &Settings) -> Result<()> {
    let loaded = load_rows(input, settings)?;
    let data = Dataset::new(loaded.subset, loaded.rows)?;
    let subsets = match &settings.features {
        Some(f) => f.clone(),
        None if loaded.subset == FeatureSubset::Combined => FeatureSubset::ALL.to_vec(),
        None => vec![loaded.subset],
    };
    let plan = make_folds(&data, settings.k, settings.seed)?;
    let specs = settings.specs();

    let mut report: Option<EvalReport> = None;
    let mut models = Vec::new();
    for &subset in &subsets {
        let part = project(&data, subset)?;
        let r = cross_validate(&part, &specs, &plan)?;
        match &mut report {
            Some(all) => all.merge(r)?,
            None => report = Some(r),
        }
        for spec in &specs {
            let m = fit(spec, &part)?
                .with_provenance(loaded.lexicon_version.clone(), loaded.sentiment_backend.clone());
            models.push(m);
        }
    }
    let mut report = report.expect("at least one feature set");
    report.metadata.lexicon_version = loaded.lexicon_version.clone();
    report.metadata.sentiment_backend = loaded.sentiment_backend.clone();
    report.metadata.config = settings.effective_json();

    let out = settings.out.clone().unwrap_or_else(|| PathBuf::from("linguafraud-out"));
    let text = render_report(&report);
    write_file(&out.join("report.txt"), &text)?;
    write_file(&out.join("report.json"), report.to_json())?;
    for m in &models {
        let name = format!("{}-{}.model.json", m.subset.as_str(), m.kind.as_str());
        write_file(&out.join("models").join(name), m.to_json())?;
    }
    for w in &report.metadata.warnings {
        eprintln!("warning: {w}");
    }
    print!("{text}");
    println!("wrote {}", out.display());
    Ok(())
}

/// Checks that `settings` extract features the way `model` was trained.
fn check_provenance(model: &TrainedModel, settings: &Settings) -> Result<()> {
    if let Some(v) = &model.lexicon_version {
        if v != settings.lexicon.version() {
            return Err(Error::LexiconVersionMismatch {
                model: v.clone(),
                loaded: settings.lexicon.version().to_string(),
            });
        }
    }
    if let Some(b) = &model.sentiment_backend {
        let ours = match &settings.sentiment {
            SentimentChoice::Lexicon => format!("lexicon:{}", settings.valence.version),
            SentimentChoice::External(_) => "external".to_string(),
        };
        if *b != ours {
            return Err(Error::LexiconVersionMismatch {
                model: b.clone(),
                loaded: ours,
            });
        }
    }
    Ok(())
}

fn transcript_row(path: &Path, model: &TrainedModel, settings: &Settings) -> Result<(String, Vec<f64>)> {
    check_provenance(model, settings)?;
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let t = parse_transcript(&bytes).map_err(|e| Error::in_file(path, e))?;
    let corpus = Corpus::new(vec![t])?;
    let ext = sentiment_scores(settings, &corpus)?;
    let t = &corpus.transcripts()[0];
    let row = featurize(t, &settings.lexicon, backend(settings, &ext), settings.feature_config())?;
    let values = row.values[model.subset.columns()].to_vec();
    Ok((row.id, values))
}

fn matrix_row(path: &Path, id: &str, model: &TrainedModel) -> Result<Vec<f64>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let (subset, rows) = read_matrix(file).map_err(|e| Error::in_file(path, e))?;
    let row = rows
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownTranscript(id.to_string()))?;
    if subset == model.subset {
        Ok(row.values)
    } else if subset == FeatureSubset::Combined {
        Ok(row.values[model.subset.columns()].to_vec())
    } else {
        Err(Error::InvalidProjection {
            from: subset.as_str(),
            to: model.subset.as_str(),
        })
    }
}

pub struct Query<'a> {
    pub transcript: Option<&'a Path>,
    pub matrix: Option<&'a Path>,
    pub row: Option<&'a str>,
}

pub fn explain(model_path: &Path, query: Query<'_>, settings: &Settings) -> Result<()> {
    let model = TrainedModel::load(model_path)?;
    let row = match (query.transcript, query.matrix, query.row) {
        (Some(t), None, None) => Some(transcript_row(t, &model, settings)?.1),
        (None, Some(m), Some(id)) => Some(matrix_row(m, id, &model)?),
        (None, None, None) => None,
        (None, Some(_), None) => return Err(usage("--matrix needs --row <id>")),
        (None, None, Some(_)) => return Err(usage("--row needs --matrix <path>")),
        _ => return Err(usage("give either --transcript or --matrix with --row")),
    };
    let expl = export_explanation(&model, row.as_deref())?;
    print!("{}", expl.to_text());
    if let (Some(r), false) = (&row, model.kind == ModelKind::Knn) {
        println!();
        print!("{}", trace_prediction(&model, r)?);
    }
    if let Some(out) = &settings.out {
        match render_tree(&expl) {
            Some(dot) => write_file(out, dot)?,
            None => {
                let mut json = serde_json::to_string_pretty(&expl).expect("explanation serializes");
                json.push('\n');
                write_file(out, json)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Prediction<'a> {
    id: &'a str,
    model: ModelKind,
    subset: FeatureSubset,
    prediction: Class,
    features: Vec<(&'a str, f64)>,
    trace: &'a str,
    config: serde_json::Value,
}

pub fn predict(model_path: &Path, transcript: &Path, settings: &Settings) -> Result<()> {
    let model = TrainedModel::load(model_path)?;
    let (id, values) = transcript_row(transcript, &model, settings)?;
    let label = model.predict(&values)?;
    let trace = trace_prediction(&model, &values)?;
    println!("{id}\t{label}");
    print!("{trace}");
    if let Some(out) = &settings.out {
        let p = Prediction {
            id: &id,
            model: model.kind,
            subset: model.subset,
            prediction: label,
            features: model
                .feature_names
                .iter()
                .map(String::as_str)
                .zip(values.iter().copied())
                .collect(),
            trace: &trace,
            config: settings.effective_json(),
        };
        let mut json = serde_json::to_string_pretty(&p).expect("prediction serializes");
        json.push('\n');
        write_file(out, json)?;
    }
    Ok(())
}

/// Hidden so corpus loading skips it.
pub const SYNTH_CONFIG_FILE: &str = ".synth-config.json";

pub struct SynthOverrides {
    pub signal: Option<f64>,
    pub n_fraud: Option<usize>,
    pub n_non_fraud: Option<usize>,
}

pub fn synth(settings: &Settings, overrides: SynthOverrides) -> Result<()> {
    let mut cfg: SynthConfig = settings.synth.clone();
    if let Some(s) = overrides.signal {
        cfg.signal_strength = s;
    }
    if let Some(n) = overrides.n_fraud {
        cfg.n_fraud = n;
    }
    if let Some(n) = overrides.n_non_fraud {
        cfg.n_non_fraud = n;
    }
    let out = settings.out.clone().unwrap_or_else(|| PathBuf::from("synth-corpus"));
    let corpus = generate(&cfg)?;
    corpus.write_dir(&out)?;
    let mut json = serde_json::to_string_pretty(&cfg).expect("config serializes");
    json.push('\n');
    write_file(&out.join(SYNTH_CONFIG_FILE), json)?;
    let c = corpus.corpus.class_counts();
    println!(
        "wrote {} transcripts to {} (fraud {}, non_fraud {}, seed {}, signal {})",
        corpus.corpus.len(),
        out.display(),
        c.fraud,
        c.non_fraud,
        cfg.seed,
        cfg.signal_strength
    );
    Ok(())
}
