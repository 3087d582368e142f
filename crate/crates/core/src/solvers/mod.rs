//! Clustering algorithms and exhaustive reference solvers.
//!
//! * [`approx2`] - the central-edge 2-approximation for unit weights and capacity 2.
//! * [`tree_exact`] - exact algorithm for DAGs whose underlying graph is a tree.
//! * [`tree_peeling`] - pendant-peeling recursion for trees; not always optimal.
//! * [`brute_force_opt`] / [`brute_force_matching_opt`] - exhaustive optima,
//!   used as oracles.

mod approx;
mod brute;
mod matching;
mod peeling;
mod tree;

use thiserror::Error;

use crate::clustering::{ClusteringError, Instance};
use crate::dag::NodeId;
use crate::scalar::DelayScalar;

pub use approx::{approx2, central_arc, longest_path_lower_bound, ApproxStep, ApproxTrace, TieBreakPolicy};
pub use brute::{brute_force_matching_opt, brute_force_opt};
pub use matching::{enumerate_maximal_matchings, for_each_maximal_matching};
pub use peeling::tree_peeling;
pub use tree::tree_exact;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("instance has {nodes} nodes, brute force is capped at {cap}")]
    TooLarge { nodes: usize, cap: usize },
    #[error("more than {cap} maximal matchings")]
    MatchingExplosion { cap: u64 },
    #[error("underlying simple graph is not a tree")]
    NotATree,
    #[error("path has no arcs")]
    EmptyPath,
    #[error("node {node} is heavier than the cluster capacity")]
    NoFeasibleClustering { node: NodeId },
    #[error(transparent)]
    Clustering(#[from] ClusteringError),
}

/// Checks unit weights, capacity 2 and zero node delays.
pub(crate) fn require_unit_pairing<T: DelayScalar>(instance: &Instance<T>) -> Result<(), SolverError> {
    let dag = &instance.dag;
    if instance.params.capacity != 2 {
        return Err(SolverError::PreconditionViolated(format!(
            "capacity must be 2, got {}",
            instance.params.capacity
        )));
    }
    if let Some(v) = dag.nodes().find(|&v| dag.weight(v) != 1) {
        return Err(SolverError::PreconditionViolated(format!(
            "node {v} has weight {}, expected 1",
            dag.weight(v)
        )));
    }
    if let Some(v) = dag.nodes().find(|&v| !dag.delay(v).is_zero()) {
        return Err(SolverError::PreconditionViolated(format!(
            "node {v} has delay {}, expected 0",
            dag.delay(v)
        )));
    }
    Ok(())
}
