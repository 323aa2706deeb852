use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] resdens::Error),

    #[error("{0}")]
    Usage(String),

    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Csv { .. } => "csv",
            CliError::Io { .. } => "io",
            CliError::Core(_) => "estimation",
            CliError::Usage(_) => "usage",
            CliError::Serialize(_) => "serialize",
        }
    }

    /// Machine-readable error object written to stderr on failure.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
            }
        })
        .to_string()
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
