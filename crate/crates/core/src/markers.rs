//! Linguistic-marker lexicon and the per-category phrase matcher.
//!
//! Each category is compiled into a token-level trie. Counting scans left to
//! right and, at each position, takes the longest pattern of the category
//! that starts there, then resumes after it. Categories are matched
//! independently, so one token may count toward several categories.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tokenize::{tokenize, TokenStream};

pub const MARKER_COUNT: usize = 16;

pub const MARKER_NAMES: [&str; MARKER_COUNT] = [
    "causation",
    "negation",
    "hedging",
    "qualified_assertions",
    "temporal_lacunae",
    "overzealous_expression",
    "memory_loss",
    "third_person_plural_pronouns",
    "pronouns",
    "negative_emotion",
    "negative_sentiment",
    "positive_emotion",
    "positive_sentiment",
    "disfluencies",
    "self_reference",
    "nominalised_verbs",
];

const DEFAULT_LEXICON: &str = include_str!("../data/markers-v1.json");

pub type MarkerCounts = [u64; MARKER_COUNT];

#[derive(Debug, Clone, Default)]
struct Trie {
    // node -> (token id -> child)
    children: Vec<HashMap<u32, usize>>,
    terminal: Vec<bool>,
}

impl Trie {
    fn new() -> Self {
        Trie {
            children: vec![HashMap::new()],
            terminal: vec![false],
        }
    }

    fn insert(&mut self, ids: &[u32]) -> bool {
        let mut node = 0;
        for &id in ids {
            node = match self.children[node].get(&id) {
                Some(&next) => next,
                None => {
                    let next = self.children.len();
                    self.children.push(HashMap::new());
                    self.terminal.push(false);
                    self.children[node].insert(id, next);
                    next
                }
            };
        }
        !std::mem::replace(&mut self.terminal[node], true)
    }

    /// Length of the longest pattern starting at `ids[0]`, if any.
    fn longest_at(&self, ids: &[Option<u32>]) -> Option<usize> {
        let mut node = 0;
        let mut best = None;
        for (len, id) in ids.iter().enumerate() {
            let Some(id) = id else { break };
            match self.children[node].get(id) {
                Some(&next) => node = next,
                None => break,
            }
            if self.terminal[node] {
                best = Some(len + 1);
            }
        }
        best
    }

    fn count(&self, ids: &[Option<u32>]) -> u64 {
        let mut i = 0;
        let mut n = 0;
        while i < ids.len() {
            match self.longest_at(&ids[i..]) {
                Some(len) => {
                    n += 1;
                    i += len;
                }
                None => i += 1,
            }
        }
        n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerCategory {
    pub name: String,
    pub patterns: Vec<Vec<String>>,
}

/// Sixteen named categories of token-sequence patterns plus their compiled
/// matchers.
#[derive(Debug, Clone)]
pub struct MarkerLexicon {
    version: String,
    categories: Vec<MarkerCategory>,
    vocab: HashMap<String, u32>,
    tries: Vec<Trie>,
}

#[derive(Deserialize)]
struct LexiconFile {
    version: String,
    categories: BTreeMap<String, Vec<String>>,
}

impl MarkerLexicon {
    /// Builds a lexicon from exactly [`MARKER_COUNT`] categories with
    /// distinct names. Patterns must be non-empty lowercase token sequences,
    /// distinct within their category.
    pub fn new(version: impl Into<String>, categories: Vec<MarkerCategory>) -> Result<Self> {
        if categories.len() != MARKER_COUNT {
            return Err(Error::InvalidLexicon(format!(
                "expected {MARKER_COUNT} categories, got {}",
                categories.len()
            )));
        }
        let mut seen = HashSet::new();
        let mut vocab: HashMap<String, u32> = HashMap::new();
        let mut tries = Vec::with_capacity(MARKER_COUNT);
        for cat in &categories {
            if !seen.insert(cat.name.as_str()) {
                return Err(Error::InvalidLexicon(format!(
                    "duplicate category `{}`",
                    cat.name
                )));
            }
            let mut trie = Trie::new();
            for pattern in &cat.patterns {
                if pattern.is_empty() {
                    return Err(Error::InvalidLexicon(format!(
                        "empty pattern in `{}`",
                        cat.name
                    )));
                }
                let mut ids = Vec::with_capacity(pattern.len());
                for tok in pattern {
                    if tok.is_empty()
                        || tok.chars().any(|c| c.is_whitespace() || c.is_uppercase())
                    {
                        return Err(Error::InvalidLexicon(format!(
                            "pattern token `{tok}` in `{}` is not a lowercase token",
                            cat.name
                        )));
                    }
                    let next = vocab.len() as u32;
                    ids.push(*vocab.entry(tok.clone()).or_insert(next));
                }
                if !trie.insert(&ids) {
                    return Err(Error::InvalidLexicon(format!(
                        "duplicate pattern `{}` in `{}`",
                        pattern.join(" "),
                        cat.name
                    )));
                }
            }
            tries.push(trie);
        }
        Ok(MarkerLexicon {
            version: version.into(),
            categories,
            vocab,
            tries,
        })
    }

    /// Parses a lexicon file: `{"version": ..., "categories": {name: [phrase, ...]}}`.
    /// The category set must be exactly the canonical sixteen; phrases go
    /// through [`tokenize`].
    pub fn from_json(text: &str) -> Result<Self> {
        let file: LexiconFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidLexicon(e.to_string()))?;
        let mut by_name = file.categories;
        let mut categories = Vec::with_capacity(MARKER_COUNT);
        for name in MARKER_NAMES {
            let phrases = by_name
                .remove(name)
                .ok_or_else(|| Error::InvalidLexicon(format!("missing category `{name}`")))?;
            let patterns = phrases
                .iter()
                .map(|p| tokenize(p).tokens)
                .collect::<Vec<_>>();
            categories.push(MarkerCategory {
                name: name.to_string(),
                patterns,
            });
        }
        if let Some(extra) = by_name.keys().next() {
            return Err(Error::InvalidLexicon(format!("unknown category `{extra}`")));
        }
        Self::new(file.version, categories)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::in_file(path, e))
    }

    /// The lexicon shipped with the crate (`markers-v1`).
    pub fn default_lexicon() -> Self {
        Self::from_json(DEFAULT_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn categories(&self) -> &[MarkerCategory] {
        &self.categories
    }

    /// True when the categories carry the canonical names in canonical order.
    pub fn is_canonical(&self) -> bool {
        self.categories
            .iter()
            .zip(MARKER_NAMES)
            .all(|(c, n)| c.name == n)
    }

    fn token_ids(&self, stream: &TokenStream) -> Vec<Option<u32>> {
        stream
            .tokens
            .iter()
            .map(|t| self.vocab.get(t).copied())
            .collect()
    }

    pub fn count_markers(&self, stream: &TokenStream) -> MarkerCounts {
        let ids = self.token_ids(stream);
        let mut counts = [0; MARKER_COUNT];
        for (c, trie) in counts.iter_mut().zip(&self.tries) {
            *c = trie.count(&ids);
        }
        counts
    }

    /// Matched spans per category: `(category index, token range)`.
    pub fn find_markers(&self, stream: &TokenStream) -> Vec<(usize, std::ops::Range<usize>)> {
        let ids = self.token_ids(stream);
        let mut out = Vec::new();
        for (cat, trie) in self.tries.iter().enumerate() {
            let mut i = 0;
            while i < ids.len() {
                match trie.longest_at(&ids[i..]) {
                    Some(len) => {
                        out.push((cat, i..i + len));
                        i += len;
                    }
                    None => i += 1,
                }
            }
        }
        out
    }
}

pub fn count_markers(stream: &TokenStream, lexicon: &MarkerLexicon) -> MarkerCounts {
    lexicon.count_markers(stream)
}

/// Element-wise sum of per-response counts.
pub fn conversation_marker_features(
    responses: &[TokenStream],
    lexicon: &MarkerLexicon,
) -> MarkerCounts {
    let mut total = [0; MARKER_COUNT];
    for r in responses {
        for (t, c) in total.iter_mut().zip(lexicon.count_markers(r)) {
            *t += c;
        }
    }
    total
}
