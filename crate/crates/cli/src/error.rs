use std::fmt;
use std::io;
use std::path::PathBuf;

use parity_scope::ErrorClass;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(parity_scope::Error),
    Io { path: PathBuf, source: io::Error },
    /// Validation ran but some checks failed.
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 configuration, 3 physics condition, 4 numerical convergence, 1 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e.class() {
                ErrorClass::Input => 2,
                ErrorClass::Physics => 3,
                ErrorClass::Numerical => 4,
            },
            CliError::Io { .. } => 1,
            CliError::ChecksFailed { .. } => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::ChecksFailed { failed, total } => write!(f, "{failed} of {total} validation checks failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<parity_scope::Error> for CliError {
    fn from(e: parity_scope::Error) -> Self {
        CliError::Core(e)
    }
}
