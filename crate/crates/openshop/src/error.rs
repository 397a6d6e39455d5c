//! Crate error type.

/// Errors surfaced by the library.
///
/// The CLI maps these onto process exit codes: invalid input → 2,
/// resource exhaustion → 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or out-of-contract input (ragged matrix, infeasible initial
    /// schedule, bad coalition string, undersized horizon, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A schedule operation that requires feasibility was given an infeasible
    /// schedule (e.g. machine orders are undefined under slot ties).
    #[error("infeasible schedule: {0}")]
    Infeasible(String),

    /// The branch-and-bound exhausted its node budget. `best_cost` is the
    /// cheapest admissible coalition cost proved so far (an upper bound on the
    /// true minimum, hence a lower bound on the coalition's value).
    #[error("node limit exhausted after {nodes} nodes (best cost so far {best_cost})")]
    NodeLimit { nodes: u64, best_cost: u64 },
}
