use thiserror::Error;

/// Errors raised across the intertwiner pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A weight or dilogarithm parameter sits on a singular value (e.g. `1 + u^n = 0`).
    #[error("degenerate weight: {0}")]
    DegenerateWeight(String),

    #[error("word {0:?} is not pseudo-Anosov (needs both L and R)")]
    NotPseudoAnosov(String),

    #[error("diagonal exchange degenerate at step {index}: {reason}")]
    DegenerateStep { index: usize, reason: String },

    #[error("solver failure: {0}")]
    SolverFailure(String),

    /// The logarithm lift failed to close up on integers; signals a branch bug.
    #[error("branch inconsistency: {0}")]
    BranchInconsistency(String),

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("internal consistency: {0}")]
    Internal(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    /// True for errors caused by the geometry of the input (degenerate or
    /// non-pseudo-Anosov data) rather than by a solver.
    pub fn is_degenerate_geometry(&self) -> bool {
        matches!(
            self,
            Error::DegenerateWeight(_) | Error::NotPseudoAnosov(_) | Error::DegenerateStep { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
