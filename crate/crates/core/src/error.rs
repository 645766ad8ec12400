use thiserror::Error;

/// Errors raised by construction, measure evaluation, and the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet is empty")]
    EmptyAlphabet,

    #[error("{labels} labels but {values} values")]
    LengthMismatch { labels: usize, values: usize },

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("negative mass {mass} for label {label:?}")]
    NegativeMass { label: String, mass: f64 },

    #[error("non-finite mass {mass} for label {label:?}")]
    NonFiniteMass { label: String, mass: f64 },

    #[error("masses sum to {sum}, not 1")]
    NotNormalized { sum: f64 },

    #[error("negative weight {weight} for label {label:?}")]
    NegativeWeight { label: String, weight: f64 },

    #[error("all weights are zero")]
    AllZeroWeights,

    #[error("joint masses must form a {n}x{n} matrix, got {len} entries")]
    NotSquare { n: usize, len: usize },

    #[error("no counts given")]
    EmptyInput,

    #[error("all counts are zero")]
    AllZeroCounts,

    #[error("alphabet size must be at least 1")]
    ZeroSize,

    #[error("normalized entropy is undefined for a single-symbol alphabet")]
    SingletonAlphabet,

    #[error("arguments are defined over different alphabets")]
    LabelMismatch,

    #[error("q({label:?}) = 0 where p({label:?}) > 0")]
    AbsoluteContinuityViolated { label: String },

    #[error("probability {0} outside the admissible range")]
    OutOfRange(f64),

    #[error("derivative diverges at probability 0")]
    ZeroProbability,

    #[error("unknown property {0:?}")]
    UnknownProperty(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid curve spec: {0}")]
    InvalidSpec(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("record {record:?} (line {line}): {source}")]
    Record {
        record: String,
        line: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
