//! Library half of the `optodrag` binary: argument model, command execution
//! and the CSV/JSON writers. Kept separate from `main.rs` so tests can drive
//! commands in-process.

pub mod args;
pub mod emit;
pub mod run;

use std::path::PathBuf;

use serde_json::json;

pub use args::Cli;
pub use run::execute;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] optodrag_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("selfcheck failed: {0}")]
    SelfcheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_VALIDATION,
            CliError::Model(e) if e.is_validation() => EXIT_VALIDATION,
            CliError::Model(_) | CliError::SelfcheckFailed(_) => EXIT_NUMERICAL,
            CliError::Io { .. } => EXIT_IO,
        }
    }

    fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_VALIDATION => "validation",
            EXIT_NUMERICAL => "numerical",
            _ => "io",
        }
    }

    /// Individual messages; one per violated field for validation errors.
    pub fn messages(&self) -> Vec<String> {
        match self {
            CliError::Model(optodrag_core::Error::Validation(v)) => v.clone(),
            other => vec![other.to_string()],
        }
    }

    /// Single-line JSON record written to stderr.
    pub fn to_json(&self) -> String {
        json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "messages": self.messages(),
        })
        .to_string()
    }
}
