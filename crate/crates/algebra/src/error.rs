use thiserror::Error;

/// Why a Groebner computation was abandoned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitKind {
    Degree(u32),
    BasisSize(usize),
    Time,
    Cancelled,
}

impl std::fmt::Display for LimitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LimitKind::Degree(d) => write!(f, "degree limit {d} exceeded"),
            LimitKind::BasisSize(n) => write!(f, "basis size limit {n} exceeded"),
            LimitKind::Time => write!(f, "time budget exhausted"),
            LimitKind::Cancelled => write!(f, "cancelled"),
        }
    }
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("dimension undefined for the unit ideal")]
    DimensionUndefined,
    #[error("computation abandoned ({kind}); partial basis has {} elements", partial.len())]
    Abandoned {
        kind: LimitKind,
        /// Basis elements found before the limit hit, in canonical text form.
        partial: Vec<String>,
    },
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
