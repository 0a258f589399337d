use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("unknown speaker `{0}` (expected `agent` or `customer`)")]
    UnknownSpeaker(String),
    #[error("unknown label `{0}` (expected `fraud` or `non_fraud`)")]
    UnknownLabel(String),
    #[error("document has no `id`")]
    MissingId,
    #[error("duplicate transcript id `{0}`")]
    DuplicateId(String),
    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("invalid lexicon: {0}")]
    InvalidLexicon(String),
    #[error("invalid valence lexicon: {0}")]
    InvalidValenceLexicon(String),

    #[error("sentiment score {score} for `{id}`[{index}] is outside [-1, 1]")]
    OutOfRangeScore { id: String, index: usize, score: f64 },
    #[error("score file references unknown transcript `{0}`")]
    UnknownTranscript(String),
    #[error("no sentiment score for `{id}` response {index}")]
    MissingResponseScore { id: String, index: usize },
    #[error("response index {index} out of range for `{id}` ({responses} responses)")]
    ResponseIndexOutOfRange { id: String, index: usize, responses: usize },
    #[error("duplicate score row for `{id}` response {index}")]
    DuplicateScore { id: String, index: usize },
    #[error("cannot aggregate an empty score list")]
    EmptyScoreList,

    #[error("transcript `{0}` has no customer responses")]
    NoCustomerResponses(String),
    #[error("row `{0}` is unlabeled")]
    UnlabeledRow(String),
    #[error("feature matrix: {0}")]
    InvalidMatrix(String),
    #[error("projection from {from} to {to} is not defined")]
    InvalidProjection { from: &'static str, to: &'static str },

    #[error("training data contains a single class")]
    SingleClassTraining,
    #[error("training data is empty")]
    EmptyTraining,
    #[error("feature value is NaN or infinite (row `{0}`)")]
    NonFiniteFeature(String),
    #[error("dimension mismatch: model expects {expected} features, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("a query row is required to explain a k-nearest-neighbours model")]
    MissingQuery,
    #[error("invalid model file: {0}")]
    InvalidModel(String),
    #[error("lexicon version mismatch: model uses `{model}`, loaded `{loaded}`")]
    LexiconVersionMismatch { model: String, loaded: String },

    #[error("too few rows for {k}-fold cross-validation: {rows}")]
    TooFewRows { rows: usize, k: usize },
    #[error("fold plan does not match dataset: {0}")]
    InvalidFoldPlan(String),
    #[error("fold {fold}: {source}")]
    InFold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("invalid report file: {0}")]
    InvalidReport(String),

    #[error("invalid synthetic corpus config: {0}")]
    InvalidConfig(String),

    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_file(path: impl Into<PathBuf>, source: Error) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(source),
        }
    }

    /// True when the error stems from user-supplied input rather than a bug
    /// or an environment failure. The CLI maps these to exit code 2.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::InFile { source, .. } | Error::InFold { source, .. } => {
                source.is_input_error()
            }
            Error::Io { source, .. } => matches!(
                source.kind(),
                std::io::ErrorKind::NotFound
                    | std::io::ErrorKind::PermissionDenied
                    | std::io::ErrorKind::InvalidData
            ),
            _ => true,
        }
    }

    /// Strips file/fold provenance wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::InFile { source, .. } | Error::InFold { source, .. } => source.root(),
            other => other,
        }
    }
}
