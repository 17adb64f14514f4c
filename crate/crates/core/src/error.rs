use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised anywhere in the verification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Compressors refuse zero-length input; an empty document is a corpus
    /// defect, not a valid verification case.
    #[error("empty input: {context}")]
    EmptyInput { context: String },

    /// EER calibration requires equally many Y and N scores.
    #[error("Number of Y and N problems mismatch! ({y_count} Y vs {n_count} N)")]
    LengthMismatch { y_count: usize, n_count: usize },

    /// Calibration got an empty score list for one class.
    #[error("no scores for class {class}")]
    EmptyScores { class: char },

    /// Training and evaluation need ground-truth labels on every problem.
    #[error("problem {id} has no ground-truth label")]
    UnlabeledProblem { id: String },

    /// Metric computation over an empty record set.
    #[error("metrics need at least one problem")]
    EmptyMetricInput,

    /// ROC-AUC is undefined when only one truth class is present.
    #[error("ROC-AUC needs at least one Y-truth and one N-truth problem")]
    SingleClass,

    #[error("problem directory {dir} has no unknown document")]
    MissingUnknown { dir: PathBuf },

    #[error("problem directory {dir} has more than one unknown document")]
    MultipleUnknowns { dir: PathBuf },

    #[error("problem directory {dir} has no known documents")]
    NoKnownDocuments { dir: PathBuf },

    #[error("truth file references problem {id} but {dir} does not exist")]
    TruthReferencesMissingProblem { id: String, dir: PathBuf },

    #[error("cannot read {path}: {source}")]
    UnreadableFile {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed truth file {path}, line {line}: {content:?}")]
    MalformedTruthLine {
        path: PathBuf,
        line: usize,
        content: String,
    },

    /// The overlap coefficient is undefined for an empty token set.
    #[error("token set is empty")]
    EmptyTokenSet,

    /// Splitting would leave the train or the eval side empty.
    #[error("cannot split {total} problems into non-empty train and eval sides")]
    TooFewProblems { total: usize },

    #[error("cannot parse model: {reason}")]
    ModelParse { reason: String },

    #[error("unsupported model format version {found} (expected {expected})")]
    ModelVersion { found: u32, expected: u32 },

    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    /// Process exit code contract of the CLI: 0 success, 2 corpus error,
    /// 3 calibration error, 4 model error, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            EmptyInput { .. }
            | MissingUnknown { .. }
            | MultipleUnknowns { .. }
            | NoKnownDocuments { .. }
            | TruthReferencesMissingProblem { .. }
            | UnreadableFile { .. }
            | MalformedTruthLine { .. }
            | UnlabeledProblem { .. }
            | TooFewProblems { .. } => 2,
            LengthMismatch { .. } | EmptyScores { .. } => 3,
            ModelParse { .. } | ModelVersion { .. } => 4,
            _ => 1,
        }
    }
}
