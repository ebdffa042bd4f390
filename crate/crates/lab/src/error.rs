use permuton_lab_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("{0}")]
    Usage(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("property violation: {0}")]
    Violation(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Usage(_) | LabError::Config { .. } => EXIT_USAGE,
            LabError::Violation(_) => EXIT_VIOLATION,
            LabError::Io(_) | LabError::Csv(_) | LabError::Json(_) => EXIT_USAGE,
            LabError::Core(e) => match e {
                CoreError::PreconditionViolated(_) | CoreError::LayerOverflow { .. } => EXIT_PRECONDITION,
                CoreError::InnerBijectionFailure(_)
                | CoreError::ReconstructionFailure(_)
                | CoreError::NotATraversal(_) => EXIT_VIOLATION,
                _ => EXIT_USAGE,
            },
        }
    }
}

pub type LabResult<T> = std::result::Result<T, LabError>;
