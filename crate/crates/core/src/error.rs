use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed row at line {line}: {message}")]
    MalformedRow { line: u64, message: String },

    #[error("unmapped label '{value}' at line {line}")]
    UnmappedLabel { value: String, line: u64 },

    #[error("duplicate article id '{id}'")]
    DuplicateId { id: String },

    #[error("article '{id}' has no label")]
    Unlabeled { id: String },

    #[error("unknown stopword list '{id}'")]
    UnknownStopwordList { id: String },

    #[error("empty vocabulary after pruning")]
    EmptyVocabulary,

    #[error("training data contains a single class; both FAKE and REAL are required")]
    SingleClass,

    #[error("non-finite feature value at row {row}")]
    NonFiniteFeature { row: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: {left} predictions vs {right} labels")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid {name}: {message}")]
    InvalidParam { name: &'static str, message: String },

    #[error("split is degenerate: {message}")]
    DegenerateSplit { message: String },

    #[error("model bundle error: {0}")]
    Bundle(String),

    #[error("unsupported bundle format version {found} (supported: {supported})")]
    BundleVersion { found: u64, supported: u64 },

    #[error("bundle checksum mismatch: stored {stored}, computed {computed}")]
    BundleChecksum { stored: String, computed: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParam {
            name,
            message: message.into(),
        }
    }
}
