use std::fmt;

/// Failure of a CLI invocation, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(berry_core::Error),
    Io(std::io::Error),
    /// Sweep finished but this many cells failed.
    PartialSweep(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Io(_) => 2,
            Self::Core(e) => core_exit_code(e),
            Self::PartialSweep(_) => 5,
        }
    }
}

pub fn core_exit_code(e: &berry_core::Error) -> i32 {
    use berry_core::Error as E;
    match e {
        E::NonConvergence { .. } => 3,
        E::Resolution { .. } => 4,
        E::PathFailure { source, .. } => core_exit_code(source),
        _ => 2,
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Core(e) => write!(f, "{e}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
            Self::PartialSweep(n) => write!(f, "{n} sweep cell(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<berry_core::Error> for CliError {
    fn from(e: berry_core::Error) -> Self {
        Self::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}
