//! Explainable fraud detection for transcribed telephone conversations.
//!
//! The pipeline reads call transcripts, keeps the customer's side, counts
//! sixteen categories of linguistic markers (hedging, negation, memory loss,
//! ...) and summarises per-response sentiment into eleven statistics. The
//! resulting 27-feature vectors train four small, inspectable classifiers
//! (Gaussian naive Bayes, a depth-3 CART tree, 3-nearest-neighbours and a
//! linear SVM), which are scored with stratified 10-fold cross-validation
//! and can export explanations that reproduce every prediction by hand.
//!
//! ```no_run
//! use linguafraud::prelude::*;
//!
//! # fn main() -> linguafraud::Result<()> {
//! let corpus = generate(&SynthConfig::default())?.corpus;
//! let lexicon = MarkerLexicon::default_lexicon();
//! let valence = ValenceLexicon::default_lexicon();
//! let rows = featurize_corpus(
//!     &corpus,
//!     &lexicon,
//!     SentimentBackend::Lexicon(&valence),
//!     FeatureConfig::default(),
//! )?;
//! let data = Dataset::new(FeatureSubset::Combined, rows)?;
//! let plan = make_folds(&data, 10, 7)?;
//! let specs: Vec<_> = ModelKind::ALL.into_iter().map(ModelSpec::new).collect();
//! let report = cross_validate(&data, &specs, &plan)?;
//! println!("{}", render_report(&report));
//! # Ok(())
//! # }
//! ```

pub mod classifiers;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod markers;
pub mod sentiment;
pub mod synth;
pub mod tokenize;
pub mod transcript;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::classifiers::{
        export_explanation, fit, predict, render_tree, trace_prediction, Explanation, ModelKind,
        ModelSpec, TrainedModel,
    };
    pub use crate::evaluation::{
        cross_validate, make_folds, make_folds_unstratified, render_report, EvalReport, FoldPlan,
    };
    pub use crate::features::{
        featurize, featurize_corpus, project, Dataset, FeatureConfig, FeatureSubset,
        FeatureVector, SentimentBackend,
    };
    pub use crate::markers::{
        conversation_marker_features, count_markers, MarkerCounts, MarkerLexicon,
    };
    pub use crate::sentiment::{
        aggregate_sentiment, load_external_scores, score_response, SentimentScore,
        SentimentStats, ValenceLexicon,
    };
    pub use crate::synth::{generate, SynthConfig};
    pub use crate::tokenize::{tokenize, TokenStream};
    pub use crate::transcript::{load_corpus, parse_transcript, Class, Corpus, Transcript};
}
