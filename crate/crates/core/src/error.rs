use slackspace_algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid facet basis: {0}")]
    InvalidBasis(String),
    #[error("rank error: expected rank {expected}, found {found}")]
    Rank { expected: usize, found: usize },
    #[error("no flag found: {0}")]
    NotFlagConnected(String),
    #[error("invalid reduction: {0}")]
    Reduction(String),
    #[error("cannot normalize: {0}")]
    CannotNormalize(String),
    #[error("not a subspace: {0}")]
    NotASubspace(String),
    #[error("reconstruction impossible: {0}")]
    ReconstructionImpossible(String),
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("certificate invalid at step {step}: {reason}")]
    CertificateInvalid { step: usize, reason: String },
}

impl ModelError {
    /// True when the failure is a resource abort rather than bad input.
    pub fn is_resource_abort(&self) -> bool {
        matches!(self, ModelError::Algebra(AlgebraError::Abandoned { .. }))
    }
}

pub type Result<T> = std::result::Result<T, ModelError>;
