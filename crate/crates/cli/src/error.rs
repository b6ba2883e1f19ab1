use std::fmt;
use std::process::ExitCode;

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed flags or config file.
    Config(String),
    /// Missing or unreadable files, malformed artifacts.
    Io(String),
    /// A certificate did not pass.
    Verify(String),
    /// The algorithm itself failed.
    Algorithm(arbcolor::Error),
    /// The run finished but needed more rounds than `--round-cap-factor` allows.
    RoundCap { rounds: usize, cap: usize },
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Verify(_) => 4,
            CliError::Algorithm(_) | CliError::RoundCap { .. } => 5,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Verify(m) => write!(f, "verification failed: {m}"),
            CliError::Algorithm(e) => write!(f, "algorithm error: {e}"),
            CliError::RoundCap { rounds, cap } => {
                write!(f, "algorithm error: {rounds} rounds exceed the round cap {cap}")
            }
        }
    }
}

impl From<arbcolor::Error> for CliError {
    fn from(e: arbcolor::Error) -> Self {
        use arbcolor::Error::*;
        match e {
            InvalidParameter(m) => CliError::Config(m),
            Io(e) => CliError::Io(e.to_string()),
            Parse { .. } => CliError::Io(e.to_string()),
            other => CliError::Algorithm(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub fn io_context<T>(r: std::io::Result<T>, path: &std::path::Path) -> CliResult<T> {
    r.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
