use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("file format error: {0}")]
    FileFormat(String),
    #[error(transparent)]
    Core(#[from] fqeuclid::Error),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::FileFormat(_) => 2,
            CliError::Core(fqeuclid::Error::NonRealEigenvalue { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::FileFormat(_) => "file_format",
            CliError::Core(_) => "module",
            CliError::Verification(_) => "verification",
            CliError::Io(_) => "io",
        }
    }

    /// `{"error": {"kind": …, "message": …, "exit_code": …}}`
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
    }
}
