use thiserror::Error;

/// Everything the library can refuse to do.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("side mismatch: {0}")]
    SideMismatch(String),
    #[error("cone is not strongly convex")]
    StronglyConvexRequired,
    #[error("quasifans have different supports")]
    SupportMismatch,
    #[error("weight {0} lies outside the weight cone")]
    OutsideWeightCone(String),
    #[error("not a section: {0}")]
    NotASection(String),
    #[error("not a root: {0}")]
    NotARoot(String),
    #[error("kernel domain: {0}")]
    KernelDomainError(String),
    #[error("catalog: {0}")]
    CatalogError(String),
    #[error("not a semisimple root: {0}")]
    NotSemisimpleRoot(String),
    #[error("structural: {0}")]
    StructuralError(String),
    #[error("split: {0}")]
    SplitError(String),
    #[error("invalid data: {}", .0.join("; "))]
    Validation(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;
