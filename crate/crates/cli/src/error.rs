use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// Where a configuration value came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Line(usize),
    Flag(String),
    /// A required key that never appeared.
    Missing,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Line(n) => write!(f, "line {n}"),
            Source::Flag(key) => write!(f, "flag --{}", key.replace('_', "-")),
            Source::Missing => f.write_str("config"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{source_loc}: {message}")]
pub struct ConfigError {
    pub source_loc: Source,
    pub message: String,
}

impl ConfigError {
    pub fn new(source_loc: Source, message: impl Into<String>) -> Self {
        Self {
            source_loc,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("malformed artifact {path}: {message}")]
    Artifact { path: PathBuf, message: String },
    #[error("solver failure: {0}")]
    Solver(#[from] ofdm_mismatch::Error),
    #[error("{failed} of {total} runs failed")]
    RunsFailed { failed: usize, total: usize },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 success, 1 config, 2 solver, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Artifact { .. } => 1,
            CliError::Solver(_) | CliError::RunsFailed { .. } => 2,
            CliError::Io { .. } => 3,
        }
    }
}
