use std::path::PathBuf;

use crate::ingest::{Condition, Orientation, ScenarioKey};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing or wrong header, expected `{expected}`, found `{found}`")]
    MissingHeader { expected: &'static str, found: String },

    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: usize, reason: String },

    #[error("line {line}: field `{field}` out of range: {value}")]
    RangeViolation {
        line: usize,
        field: &'static str,
        value: String,
    },

    #[error("line {line}: duplicate observation for svId {sv_id} at {timestamp}")]
    DuplicateObservation {
        line: usize,
        sv_id: u16,
        timestamp: String,
    },

    #[error("line {line}: timestamp goes backwards")]
    UnsortedTimestamps { line: usize },

    #[error("dataset contains no observations")]
    EmptyDataset,

    #[error("line {line}: unknown scenario key `{key}`")]
    UnknownScenarioKey { line: usize, key: String },

    #[error("line {line}: scenario key `{key}` listed more than once")]
    DuplicateScenarioKey { line: usize, key: String },

    #[error("line {line}: {reason}")]
    MalformedKeyValue { line: usize, reason: String },

    #[error("scenario `{key}`: {source}")]
    Scenario {
        key: ScenarioKey,
        #[source]
        source: Box<Error>,
    },

    #[error("non-finite angle input")]
    NonFiniteInput,

    #[error("bank angle {0} deg outside (0, 90)")]
    BankOutOfRange(f64),

    #[error("missing {orientation} orientation for {condition} condition")]
    MissingOrientation {
        condition: Condition,
        orientation: Orientation,
    },

    #[error("pattern detector needs the real-sky flat dataset (ns_flat) as its baseline")]
    MissingBaselineFlat,

    #[error("svId {0} appears in both the increasing and decreasing lists")]
    OverlappingExpectation(u16),

    #[error("requested {requested} satellites but only {available} ids are available")]
    CountTooLarge { requested: usize, available: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("refusing to write a bundle with no datasets")]
    EmptyBundle,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
