//! Browser demo: analyse a pasted call, cross-validate on a synthetic corpus,
//! and draw the decision tree learned from one.
//!
//! Every export returns a JSON string so the same functions run in native
//! tests.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use linguafraud::features::feature_names;
use linguafraud::prelude::*;
use linguafraud::transcript::{Speaker, Turn};

#[derive(Serialize)]
struct Highlight {
    start: usize,
    end: usize,
    category: String,
}

#[derive(Serialize)]
struct Response {
    text: String,
    sentiment: f64,
    highlights: Vec<Highlight>,
}

fn error_json(e: impl std::fmt::Display) -> String {
    json!({ "error": e.to_string() }).to_string()
}

/// Plain lines `agent: ...` / `customer: ...`, or a transcript JSON document.
fn parse_input(text: &str) -> linguafraud::Result<Transcript> {
    if text.trim_start().starts_with('{') {
        return parse_transcript(text.as_bytes());
    }
    let mut turns = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (who, said) = line.split_once(':').ok_or_else(|| {
            linguafraud::Error::MalformedDocument(format!("line {}: expected `speaker: text`", n + 1))
        })?;
        let speaker = match who.trim().to_lowercase().as_str() {
            "agent" | "a" => Speaker::Agent,
            "customer" | "c" => Speaker::Customer,
            other => return Err(linguafraud::Error::UnknownSpeaker(other.to_string())),
        };
        turns.push(Turn {
            speaker,
            text: said.trim().to_string(),
        });
    }
    Ok(Transcript {
        id: "pasted".into(),
        label: None,
        turns,
    })
}

fn analyze_inner(text: &str) -> linguafraud::Result<String> {
    let t = parse_input(text)?;
    let lexicon = MarkerLexicon::default_lexicon();
    let valence = ValenceLexicon::default_lexicon();
    let row = featurize(&t, &lexicon, SentimentBackend::Lexicon(&valence), FeatureConfig::default())?;
    let names = lexicon.categories();
    let responses: Vec<Response> = t
        .customer_responses()
        .map(|r| {
            let stream = tokenize(r);
            let highlights = lexicon
                .find_markers(&stream)
                .into_iter()
                .map(|(cat, toks)| Highlight {
                    start: stream.spans[toks.start].start,
                    end: stream.spans[toks.end - 1].end,
                    category: names[cat].name.clone(),
                })
                .collect();
            Response {
                text: r.to_string(),
                sentiment: score_response(&stream, &valence).value(),
                highlights,
            }
        })
        .collect();
    let features: Vec<_> = feature_names().into_iter().zip(row.values.iter().copied()).collect();
    Ok(json!({ "responses": responses, "features": features }).to_string())
}

/// Marker hits, response scores and the 27 features of one call.
#[wasm_bindgen]
pub fn analyze(text: &str) -> String {
    analyze_inner(text).unwrap_or_else(error_json)
}

fn synthetic(signal: f64, seed: u32) -> linguafraud::Result<Dataset> {
    let cfg = SynthConfig {
        seed: seed as u64,
        signal_strength: signal,
        ..SynthConfig::default()
    };
    let corpus = generate(&cfg)?.corpus;
    let valence = ValenceLexicon::default_lexicon();
    let rows = featurize_corpus(
        &corpus,
        &MarkerLexicon::default_lexicon(),
        SentimentBackend::Lexicon(&valence),
        FeatureConfig::default(),
    )?;
    Dataset::new(FeatureSubset::Combined, rows)
}

fn evaluate_inner(signal: f64, seed: u32) -> linguafraud::Result<String> {
    let data = synthetic(signal, seed)?;
    let plan = make_folds(&data, 10, seed as u64)?;
    let specs: Vec<ModelSpec> = ModelKind::ALL.into_iter().map(ModelSpec::new).collect();
    let mut report: Option<EvalReport> = None;
    for subset in FeatureSubset::ALL {
        let r = cross_validate(&project(&data, subset)?, &specs, &plan)?;
        match &mut report {
            Some(all) => all.merge(r)?,
            None => report = Some(r),
        }
    }
    let report = report.expect("three feature sets");
    Ok(json!({ "text": render_report(&report), "report": report }).to_string())
}

/// Cross-validation table for a synthetic corpus.
#[wasm_bindgen]
pub fn evaluate_synthetic(signal: f64, seed: u32) -> String {
    evaluate_inner(signal, seed).unwrap_or_else(error_json)
}

fn tree_inner(signal: f64, seed: u32) -> linguafraud::Result<String> {
    let data = synthetic(signal, seed)?;
    let model = fit(&ModelSpec::new(ModelKind::DecisionTree), &data)?;
    let expl = export_explanation(&model, None)?;
    let dot = render_tree(&expl).unwrap_or_default();
    Ok(json!({ "dot": dot, "explanation": expl }).to_string())
}

/// Depth-3 tree fitted to a whole synthetic corpus.
#[wasm_bindgen]
pub fn tree_for_synthetic(signal: f64, seed: u32) -> String {
    tree_inner(signal, seed).unwrap_or_else(error_json)
}
