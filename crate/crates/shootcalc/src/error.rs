use std::path::PathBuf;

/// Malformed input, located by 1-based line number.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: u64,
    pub message: String,
}

impl FormatError {
    pub fn new(line: u64, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or flag combinations.
    #[error("{0}")]
    Usage(String),
    /// Empty, malformed or inconsistent input data.
    #[error("{0}")]
    Data(String),
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
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

    pub fn format(path: impl Into<PathBuf>, source: FormatError) -> Self {
        CliError::Format {
            path: path.into(),
            source,
        }
    }

    /// 2 for usage errors, 3 for anything wrong with the data or files.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) | CliError::Format { .. } | CliError::Io { .. } => 3,
        }
    }
}

impl From<shootcalc_core::Error> for CliError {
    fn from(e: shootcalc_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}
