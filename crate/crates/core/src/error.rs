use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate system name `{0}`")]
    DuplicateSystem(String),

    #[error("duplicate instance id `{id}` at row {row}")]
    DuplicateInstance { id: String, row: usize },

    #[error("non-finite score at ({system}, {instance})")]
    NonFinite { system: String, instance: String },

    #[error("non-numeric cell `{value}` at row {row}, column `{column}`")]
    NonNumeric {
        value: String,
        row: usize,
        column: String,
    },

    #[error("ragged row {row}: expected {expected} cells, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("at least 2 systems are required, found {0}")]
    TooFewSystems(usize),

    #[error("at least 1 instance is required")]
    NoInstances,

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unknown system `{0}`")]
    UnknownSystem(String),

    #[error("cannot compare system `{0}` with itself")]
    SameSystem(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("Bradley-Terry MLE does not exist: system `{system}` {reason}")]
    DegenerateComparisons { system: String, reason: String },

    #[error("Bradley-Terry did not converge after {iterations} iterations (squared step {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("bootstrap statistic undefined too often ({redraws} redraws)")]
    BootstrapExhausted { redraws: usize },

    #[error("{0}")]
    Undefined(String),
}
