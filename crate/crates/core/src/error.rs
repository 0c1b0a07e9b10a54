use thiserror::Error;

/// Errors raised by the library. Numerical outcomes such as blow-up are not
/// errors; they are reported through the trajectory outcome.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parameters outside the required regime: {0}")]
    OutOfScope(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("ground state solver failed: {0}")]
    GroundState(String),

    #[error("internal contract violated: {0}")]
    Contract(String),

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
