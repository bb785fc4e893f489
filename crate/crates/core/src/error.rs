use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A CoNLL-U syntax or consistency error, located by input line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}{}: {message}", sent_id.as_ref().map(|s| format!(" (sent_id {s})")).unwrap_or_default())]
pub struct ConlluError {
    pub line: usize,
    pub sent_id: Option<String>,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Conllu(#[from] ConlluError),

    #[error("malformed bitext at line {line}: {message}")]
    Bitext { line: usize, message: String },

    #[error("duplicate ids in {side}: {}", ids.join(", "))]
    DuplicateIds { side: &'static str, ids: Vec<String> },

    #[error("pair {id}: missing sidecar value `{key}`")]
    MissingSidecar { id: String, key: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    Data(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("requested {k} classes but only {distinct} distinct values")]
    TooFewDistinct { k: usize, distinct: usize },

    #[error("insufficient data for sampling: {}", format_shortfalls(.0))]
    Shortfall(Vec<Shortfall>),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

/// How many pairs a cluster is missing after real and synthetic supply are exhausted.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Shortfall {
    pub cluster: usize,
    pub quota: usize,
    pub real_available: usize,
    pub synthetic_available: usize,
    pub missing: usize,
}

fn format_shortfalls(s: &[Shortfall]) -> String {
    s.iter()
        .map(|s| {
            format!(
                "cluster {} short by {} (quota {}, real {}, synthetic {})",
                s.cluster, s.missing, s.quota, s.real_available, s.synthetic_available
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Process exit code: 1 usage, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Internal(_) => 3,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
