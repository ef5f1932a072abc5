use std::process::ExitCode;

use slackspace::ModelError;
use slackspace_algebra::AlgebraError;

/// A failed command and its exit status.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Resource(String),
}

impl Failure {
    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Resource(m) => m,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Resource(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "error: {m}"),
            Failure::Resource(m) => write!(f, "aborted: {m}"),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Algebra(a) => a.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Abandoned { kind, partial } => Failure::Resource(format!(
                "{kind}; partial state: {} basis elements computed before stopping",
                partial.len()
            )),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(format!("malformed JSON: {e}"))
    }
}

/// Exit status of a finished command.
pub enum Outcome {
    Done,
    NotRealizable,
    /// Some inputs failed; their errors are already reported.
    Failed(u8),
}

pub fn exit_code(result: &Result<Outcome, Failure>) -> ExitCode {
    ExitCode::from(match result {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::NotRealizable) => 1,
        Ok(Outcome::Failed(c)) => *c,
        Err(f) => f.exit_code(),
    })
}
