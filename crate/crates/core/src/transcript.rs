//! Transcript documents and labelled corpora.
//!
//! A transcript file is a JSON object:
//!
//! ```json
//! {
//!   "id": "call_001",
//!   "label": "fraud",
//!   "turns": [
//!     { "speaker": "agent", "text": "Can you confirm your name?" },
//!     { "speaker": "customer", "text": "It's John." }
//!   ]
//! }
//! ```
//!
//! `label` is optional (absent means unlabeled). Files ending in `.jsonl`
//! hold one such object per line.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speaker {
    Agent,
    Customer,
}

/// Binary class. Non-fraud is 0 and fraud is 1 in every numeric context
/// (feature matrices, tree leaves, model files).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Class {
    #[serde(rename = "non_fraud")]
    NonFraud,
    #[serde(rename = "fraud")]
    Fraud,
}

impl Class {
    pub const ALL: [Class; 2] = [Class::NonFraud, Class::Fraud];

    pub fn index(self) -> usize {
        match self {
            Class::NonFraud => 0,
            Class::Fraud => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Class> {
        match i {
            0 => Some(Class::NonFraud),
            1 => Some(Class::Fraud),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::NonFraud => "non_fraud",
            Class::Fraud => "fraud",
        }
    }

    pub fn parse(s: &str) -> Result<Class> {
        match s {
            "fraud" => Ok(Class::Fraud),
            "non_fraud" => Ok(Class::NonFraud),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Turn {
    pub speaker: Speaker,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<Class>,
    pub turns: Vec<Turn>,
}

impl Transcript {
    /// Builds a transcript, dropping turns whose text is blank.
    pub fn new(id: impl Into<String>, label: Option<Class>, turns: Vec<Turn>) -> Self {
        Transcript {
            id: id.into(),
            label,
            turns: turns
                .into_iter()
                .filter(|t| !t.text.trim().is_empty())
                .collect(),
        }
    }

    pub fn customer_responses(&self) -> impl Iterator<Item = &str> + '_ {
        self.turns
            .iter()
            .filter(|t| t.speaker == Speaker::Customer)
            .map(|t| t.text.as_str())
    }

    pub fn customer_response_count(&self) -> usize {
        self.customer_responses().count()
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_document(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("transcript serializes");
        s.push('\n');
        s
    }
}

#[derive(Deserialize)]
struct RawTranscript {
    id: Option<String>,
    label: Option<String>,
    turns: Vec<RawTurn>,
}

#[derive(Deserialize)]
struct RawTurn {
    speaker: String,
    text: String,
}

pub fn parse_transcript(bytes: &[u8]) -> Result<Transcript> {
    let raw: RawTranscript =
        serde_json::from_slice(bytes).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    let id = match raw.id {
        Some(id) if !id.trim().is_empty() => id,
        _ => return Err(Error::MissingId),
    };
    let label = raw.label.as_deref().map(Class::parse).transpose()?;
    let turns = raw
        .turns
        .into_iter()
        .map(|t| {
            let speaker = match t.speaker.as_str() {
                "agent" => Speaker::Agent,
                "customer" => Speaker::Customer,
                other => return Err(Error::UnknownSpeaker(other.to_string())),
            };
            Ok(Turn {
                speaker,
                text: t.text,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Transcript::new(id, label, turns))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub fraud: usize,
    pub non_fraud: usize,
    pub unlabeled: usize,
}

impl ClassCounts {
    pub fn of(labels: impl IntoIterator<Item = Option<Class>>) -> Self {
        let mut c = ClassCounts::default();
        for l in labels {
            match l {
                Some(Class::Fraud) => c.fraud += 1,
                Some(Class::NonFraud) => c.non_fraud += 1,
                None => c.unlabeled += 1,
            }
        }
        c
    }
}

/// Transcripts ordered lexicographically by id, ids unique.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    transcripts: Vec<Transcript>,
    class_counts: ClassCounts,
}

impl Corpus {
    pub fn new(mut transcripts: Vec<Transcript>) -> Result<Self> {
        transcripts.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = transcripts.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateId(w[0].id.clone()));
        }
        let class_counts = ClassCounts::of(transcripts.iter().map(|t| t.label));
        Ok(Corpus {
            transcripts,
            class_counts,
        })
    }

    pub fn transcripts(&self) -> &[Transcript] {
        &self.transcripts
    }

    pub fn class_counts(&self) -> ClassCounts {
        self.class_counts
    }

    pub fn len(&self) -> usize {
        self.transcripts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transcripts.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Transcript> {
        self.transcripts
            .binary_search_by(|t| t.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.transcripts[i])
    }
}

/// Loads a corpus from a directory (every `*.json` / `*.jsonl` file directly
/// inside it) or from a manifest file listing one path per line, relative to
/// the manifest. Blank lines and `#` comments in manifests are skipped.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let meta = fs::metadata(path).map_err(|e| Error::io(path, e))?;
    let files = if meta.is_dir() {
        list_transcript_files(path)?
    } else {
        read_manifest(path)?
    };
    let mut transcripts = Vec::new();
    for file in &files {
        transcripts.extend(read_transcript_file(file)?);
    }
    Corpus::new(transcripts)
}

fn list_transcript_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let p = entry.map_err(|e| Error::io(dir, e))?.path();
        let ext = p.extension().and_then(|e| e.to_str());
        let hidden = p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with('.'));
        if p.is_file() && !hidden && matches!(ext, Some("json") | Some("jsonl")) {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

fn read_manifest(manifest: &Path) -> Result<Vec<PathBuf>> {
    let text = fs::read_to_string(manifest).map_err(|e| Error::io(manifest, e))?;
    let base = manifest.parent().unwrap_or_else(|| Path::new("."));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| base.join(l))
        .collect())
}

fn read_transcript_file(path: &Path) -> Result<Vec<Transcript>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let is_lines = path.extension().and_then(|e| e.to_str()) == Some("jsonl");
    if !is_lines {
        return parse_transcript(&bytes)
            .map(|t| vec![t])
            .map_err(|e| Error::in_file(path, e));
    }
    bytes
        .split(|&b| b == b'\n')
        .filter(|line| line.iter().any(|b| !b.is_ascii_whitespace()))
        .map(|line| parse_transcript(line).map_err(|e| Error::in_file(path, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_TURNS: &str = r#"{"id":"c1","turns":[
        {"speaker":"agent","text":"Can you confirm your name?"},
        {"speaker":"customer","text":"It's John."}]}"#;

    #[test]
    fn parses_customer_response() {
        let t = parse_transcript(TWO_TURNS.as_bytes()).unwrap();
        assert_eq!(t.id, "c1");
        assert_eq!(t.label, None);
        assert_eq!(t.customer_responses().collect::<Vec<_>>(), ["It's John."]);
    }

    #[test]
    fn zero_customer_turns() {
        let doc = r#"{"id":"x","label":"fraud","turns":[{"speaker":"agent","text":"Hello?"}]}"#;
        let t = parse_transcript(doc.as_bytes()).unwrap();
        assert_eq!(t.label, Some(Class::Fraud));
        assert_eq!(t.customer_response_count(), 0);
    }

    #[test]
    fn blank_turns_dropped() {
        let doc = r#"{"id":"x","turns":[{"speaker":"customer","text":"  \n"},
            {"speaker":"customer","text":"yes"}]}"#;
        let t = parse_transcript(doc.as_bytes()).unwrap();
        assert_eq!(t.turns.len(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_transcript(b"{not json"),
            Err(Error::MalformedDocument(_))
        ));
        assert!(matches!(
            parse_transcript(br#"{"turns":[]}"#),
            Err(Error::MissingId)
        ));
        assert!(matches!(
            parse_transcript(br#"{"id":"a","turns":[{"speaker":"judge","text":"x"}]}"#),
            Err(Error::UnknownSpeaker(s)) if s == "judge"
        ));
        assert!(matches!(
            parse_transcript(br#"{"id":"a","label":"maybe","turns":[]}"#),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn corpus_counts_and_order() {
        let mut ts = Vec::new();
        for i in 0..56 {
            let label = if i < 32 { Class::Fraud } else { Class::NonFraud };
            ts.push(Transcript::new(format!("call_{i:03}"), Some(label), vec![]));
        }
        ts.reverse();
        let c = Corpus::new(ts).unwrap();
        assert_eq!(c.class_counts().fraud, 32);
        assert_eq!(c.class_counts().non_fraud, 24);
        assert_eq!(c.transcripts()[0].id, "call_000");
        assert!(c.get("call_055").is_some());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let ts = vec![
            Transcript::new("a", None, vec![]),
            Transcript::new("a", None, vec![]),
        ];
        assert!(matches!(Corpus::new(ts), Err(Error::DuplicateId(id)) if id == "a"));
    }
}
