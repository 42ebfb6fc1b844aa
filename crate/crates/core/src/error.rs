use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::corpus::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("line {line}: missing tab between label and text")]
    MissingTab { line: usize },

    #[error("line {line}: unknown label token {token:?}")]
    UnknownLabel { line: usize, token: String },

    #[error("corpus has no {0} documents")]
    EmptyClass(Label),

    #[error("missing class directory {}", .0.display())]
    MissingClassDir(PathBuf),

    #[error("cannot make {k} folds: smallest class has {smallest} documents")]
    InvalidFolds { k: usize, smallest: usize },

    #[error("holdout fraction {fraction} leaves the {label} class empty on one side")]
    InvalidHoldout { fraction: f64, label: Label },

    #[error("empty vocabulary: no feature occurs at least {min_count} times")]
    EmptyVocabulary { min_count: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{scheme} is undefined for singular term{} (a={a}, c={c})", term_suffix(.term))]
    SingularTerm {
        scheme: &'static str,
        term: Option<String>,
        a: u64,
        c: u64,
    },

    #[error("{scheme} has a degenerate argument for term{} ({detail})", term_suffix(.term))]
    Degenerate {
        scheme: &'static str,
        term: Option<String>,
        detail: String,
    },

    #[error("training data must contain both classes")]
    SingleClass,

    #[error("non-finite feature value in row {row}")]
    NonFinite { row: usize },

    #[error("feature index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{what}, line {line}: {detail}")]
    Parse {
        what: &'static str,
        line: usize,
        detail: String,
    },

    #[error("empty test set")]
    EmptyTestSet,
}

fn term_suffix(term: &Option<String>) -> String {
    match term {
        Some(t) => format!(" {t:?}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of input files or configuration, as opposed to
    /// failures of the computation itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Io { .. }
                | Error::EmptyCorpus
                | Error::MissingTab { .. }
                | Error::UnknownLabel { .. }
                | Error::EmptyClass(_)
                | Error::MissingClassDir(_)
                | Error::InvalidParameter(_)
                | Error::Parse { .. }
        )
    }

    /// Attach the offending vocabulary term to a per-term weighting error.
    pub(crate) fn with_term(self, name: impl FnOnce() -> String) -> Self {
        match self {
            Error::SingularTerm { scheme, a, c, .. } => Error::SingularTerm {
                scheme,
                term: Some(name()),
                a,
                c,
            },
            Error::Degenerate { scheme, detail, .. } => Error::Degenerate {
                scheme,
                term: Some(name()),
                detail,
            },
            other => other,
        }
    }
}
