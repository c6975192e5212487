//! Counting knight's tours, exactly on small boards and by importance
//! sampling on larger ones.
//!
//! The sampler walks a randomized Warnsdorff rule: from the current square
//! each free neighbour `j` is chosen with probability proportional to
//! `N_j^-alpha`, where `N_j` counts the free squares reachable from `j`.
//! The product of inverse step probabilities of a completed walk is an
//! unbiased estimate of the number of tours from its start square.

pub mod board;
pub mod error;
pub mod exact;
pub mod sampler;
pub mod stats;

pub use board::{Board, Square, SquareSet, StartClass, Symmetry};
pub use error::{Error, Result};
pub use exact::{ExactEnumerator, TourKind, DEFAULT_EXACT_LIMIT};
pub use sampler::{
    run_batch, run_replications, run_replications_timed, Allocation, Alpha, BatchResult, PathState, Sampler, SamplerConfig,
    StartSpec, StepDistribution, TourSample, ViolationMin,
};
pub use stats::{Estimate, QuantityKind, ViolationHistogramEstimate};
