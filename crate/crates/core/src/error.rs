use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while loading or checking the input lexicons.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LexiconError {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("{rule}: {detail}")]
    Validation { rule: &'static str, detail: String },
}

impl LexiconError {
    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn rule(rule: &'static str, detail: impl Into<String>) -> Self {
        Self::Validation {
            rule,
            detail: detail.into(),
        }
    }
}

/// A caller broke the precondition of an operation.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("contract violated: {0}")]
pub struct ContractError(pub String);

impl ContractError {
    pub(crate) fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

/// The corpus is missing a sentence that a comparison requires.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("sentence {present} has no counterpart {missing} in the corpus")]
pub struct IntegrityError {
    pub present: String,
    pub missing: String,
}

/// Problems found in a corpus file when reading it back.
#[derive(Debug, Error)]
pub enum CorpusFileError {
    #[error("corpus file line {line}: {message}")]
    Row { line: usize, message: String },
    #[error("corpus file header mismatch: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// At most ten ids, then a count of the rest.
fn list_ids(ids: &[String]) -> String {
    const SHOWN: usize = 10;
    let mut s = ids.iter().take(SHOWN).cloned().collect::<Vec<_>>().join(", ");
    if ids.len() > SHOWN {
        s.push_str(&format!(" and {} more", ids.len() - SHOWN));
    }
    s
}

/// One defect in a prediction file.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PredictionError {
    #[error("{} sentence id(s) missing from predictions: {}", .0.len(), list_ids(.0))]
    MissingIds(Vec<String>),
    #[error("row {row}: duplicate id {id}")]
    DuplicateId { row: usize, id: String },
    #[error("row {row}: id {id} is not in the corpus")]
    UnknownId { row: usize, id: String },
    #[error("row {row}: score {score} for {id} is outside [0, 1]")]
    OutOfRange { row: usize, id: String, score: f64 },
    #[error("row {row}: {message}")]
    Malformed { row: usize, message: String },
    #[error("header must be `ID,Score`, found `{0}`")]
    Header(String),
}

/// Every defect found in one prediction file.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{}", render_all(.0))]
pub struct PredictionErrors(pub Vec<PredictionError>);

fn render_all(errors: &[PredictionError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Top-level error for the pipeline and command line.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error(transparent)]
    Integrity(#[from] IntegrityError),
    #[error(transparent)]
    CorpusFile(#[from] CorpusFileError),
    #[error("{path}: {source}")]
    Predictions {
        path: PathBuf,
        source: PredictionErrors,
    },
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the environment rather than of the inputs.
    pub fn is_io(&self) -> bool {
        match self {
            Self::Io { .. } => true,
            Self::CorpusFile(CorpusFileError::Io(_)) => true,
            Self::Csv(e) => e.is_io_error(),
            Self::CorpusFile(CorpusFileError::Csv(e)) => e.is_io_error(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
