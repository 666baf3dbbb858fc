use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("register size mismatch: {left} vs {right} qubits")]
    RegisterMismatch { left: usize, right: usize },

    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("register of {requested} qubits exceeds the cap of {cap} for {what}")]
    RegisterTooLarge {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("missing value for variable `{0}`")]
    MissingVariable(String),

    #[error("variable `{0}` has no qubit encoding")]
    UnencodedVariable(String),

    #[error("invalid encoding table: {0}")]
    InvalidEncoding(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("labels incompatible with loss: {0}")]
    IncompatibleLabels(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
