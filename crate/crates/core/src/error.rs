use thiserror::Error;

/// Errors produced by the exact dynamics routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid lifting: {0}")]
    InvalidLift(String),
    #[error("degree {found} not supported here (expected {expected})")]
    Degree { expected: &'static str, found: i64 },
    #[error("map is not nondecreasing")]
    NotMonotone,
    #[error("breakpoint cap of {cap} exceeded")]
    BlowUp { cap: usize },
    #[error("a finite search window is required for degree {0}")]
    WindowRequired(i64),
    #[error("point {x} is not periodic within {n_max} iterates")]
    NotPeriodic { x: String, n_max: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("loop pullback has no solution (emptied at step {step})")]
    LoopPullback { step: usize },
    #[error("output cap of {0} loops exceeded")]
    LoopCap(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("proof step failed: {0}")]
    ProofStep(String),
    #[error("infeasible plant: {0}")]
    InfeasiblePlant(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
