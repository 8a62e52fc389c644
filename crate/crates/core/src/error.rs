use thiserror::Error;

/// Errors raised by instance construction, state queries and the solvers.
#[allow(missing_docs)]
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mu has {mu} entries but sigma has {sigma}")]
    LengthMismatch { mu: usize, sigma: usize },
    #[error("need at least 2 designs, got {0}")]
    TooFewDesigns(usize),
    #[error("sigma[{index}] = {value} is not a positive finite number")]
    InvalidSigma { index: usize, value: f64 },
    #[error("mu[{index}] = {value} is not finite")]
    InvalidMean { index: usize, value: f64 },
    #[error("designs {first} and {second} tie for the largest mean")]
    TiedBest { first: usize, second: usize },
    #[error("gap between best design and design {index} is {gap}, below the tie threshold")]
    GapTooSmall { index: usize, gap: f64 },
    #[error("design index {index} out of range for k = {k}")]
    DesignOutOfRange { index: usize, k: usize },
    #[error("design {0} has no samples")]
    NoSamples(usize),
    #[error("initial sample count n0 = {0} is below the minimum of 2")]
    InitialSamplesTooFew(u64),
    #[error("batch size delta must be at least 1")]
    ZeroDelta,
    #[error("policy {kind} requires delta = 1, got {delta}")]
    DeltaNotAllowed { kind: &'static str, delta: u64 },
    #[error("invalid allocation vector: {0}")]
    InvalidAllocation(&'static str),
    #[error("tolerance must be positive and finite")]
    InvalidTolerance,
    #[error("allocation solver did not converge (residual {residual:e})")]
    SolverDidNotConverge { residual: f64 },
    #[error("iteration index t must be at least 1")]
    IterationNotStarted,
    #[error("budget {budget} must exceed the {initial} initial samples")]
    BudgetTooSmall { budget: u64, initial: u64 },
    #[error("checkpoint at total {total} is not after the previous one at {previous}")]
    CheckpointOutOfOrder { previous: u64, total: u64 },
    #[error("checkpoint grid is empty or not strictly increasing")]
    InvalidCheckpointGrid,
    #[error("traces do not share a checkpoint grid")]
    MismatchedGrids,
    #[error("no traces to aggregate")]
    NoTraces,
    #[error("slope fit needs at least 3 finite points, found {0}")]
    TooFewPoints(usize),
    #[error("unknown policy kind {0:?}")]
    UnknownPolicy(alloc::string::String),
}

/// Crate result alias.
pub type Result<T> = core::result::Result<T, Error>;
