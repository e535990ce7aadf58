use std::fmt;

/// Failure classes, each mapped to a process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, config keys or quantum numbers (exit 2).
    Usage(String),
    /// A computation failed outright (exit 1).
    Compute(String),
    /// Output could not be written (exit 1).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<spinorbasis::Error> for CliError {
    fn from(e: spinorbasis::Error) -> Self {
        use spinorbasis::Error as E;
        match e {
            E::Usage(_) | E::Domain(_) | E::Unsupported(_) => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// At least one check failed (exit 1).
    VerificationFailed,
    /// A quadrature refinement budget was exhausted (exit 3).
    NotConverged,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::NotConverged => 3,
        }
    }

    /// The more severe of two outcomes (verification failure dominates).
    pub fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::VerificationFailed, _) | (_, Status::VerificationFailed) => Status::VerificationFailed,
            (Status::NotConverged, _) | (_, Status::NotConverged) => Status::NotConverged,
            _ => Status::Ok,
        }
    }
}
