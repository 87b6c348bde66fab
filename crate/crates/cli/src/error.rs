use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong between the command line and the files.
#[derive(Debug, Error)]
pub enum CliError {
    /// The config file is missing, unreadable, or violates the schema.
    /// The message carries the offending key or invariant by name.
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },

    /// The command cannot run with the inputs given, e.g. a missing
    /// command table in an otherwise valid config.
    #[error("invalid request: {0}")]
    Invalid(String),

    /// Reading or writing an artifact failed.
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    /// The simulator itself rejected the run.
    #[error(transparent)]
    Sim(#[from] ctap_sim::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } | CliError::Invalid(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Sim(_) => "simulation",
        }
    }

    /// One-line JSON summary for scripted callers.
    pub fn machine_summary(&self) -> String {
        serde_json::json!({
            "status": "error",
            "kind": self.kind(),
            "message": self.to_string(),
        })
        .to_string()
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
