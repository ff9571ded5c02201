use thiserror::Error;

/// Errors shared across the engine.
#[derive(Debug, Error)]
pub enum QgError {
    #[error("torus mismatch: {0}")]
    TorusMismatch(String),

    #[error("unknown face `{0}`")]
    UnknownFace(String),

    #[error("unsupported network: {0}")]
    UnsupportedNetwork(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("move not applicable: {0}")]
    MoveInapplicable(String),

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QgError>;
