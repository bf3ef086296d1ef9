use std::fmt;
use std::path::PathBuf;

/// Failure of a CLI run, grouped by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unparsable or invalid input: exit 1.
    Validation(String),
    /// A checked invariant did not hold: exit 2.
    Invariant(String),
    /// Reading or writing failed: exit 3.
    Io {
        path: Option<PathBuf>,
        message: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Invariant(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violated: {m}"),
            CliError::Io {
                path: Some(p),
                message,
            } => write!(f, "i/o error on {}: {message}", p.display()),
            CliError::Io {
                path: None,
                message,
            } => write!(f, "i/o error: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<fidelity_lab::Error> for CliError {
    fn from(e: fidelity_lab::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}
