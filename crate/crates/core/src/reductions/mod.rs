//! Instance generators for the hardness reductions, with decoders that read
//! certificates back out of clusterings.
//!
//! * [`gen_partition_instance`]: weighted clustering from PARTITION.
//! * [`gen_bridge`] / [`verify_bridge_lemma`]: the 10-node bridge DAG whose
//!   worst path costs exactly `d + 3D` under every maximal matching.
//! * [`gen_var_gadget`], [`gen_clause_gadget`], [`gen_cnf_instance`]: the
//!   unit-weight, capacity-2, degree-3 construction from 3-SAT.

mod bridge;
mod cnf;
mod partition;

use thiserror::Error;

use crate::clustering::ClusteringError;
use crate::dag::DagError;
use crate::solvers::SolverError;

pub use bridge::{gen_bridge, verify_bridge_lemma, LemmaReport, BRIDGE_ARCS, BRIDGE_LABELS};
pub use cnf::{
    best_clustering_for_assignment, decode_assignment, gen_clause_gadget, gen_cnf_instance, gen_var_gadget, Assignment, Cnf, CnfMeta,
    CycleState, Literal, LiteralCycle,
};
pub use partition::{decode_partition, gen_partition_instance, PartitionMeta};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("the set is empty")]
    EmptySet,
    #[error("element {index} is zero; elements must be positive")]
    NonPositive { index: usize },
    #[error("elements sum to {total}, which is odd")]
    OddTotal { total: u64 },
    #[error("element sum overflows u64")]
    TotalOverflow,
    #[error("clause {clause} has {len} literals, expected exactly 3")]
    NotThreeCnf { clause: usize, len: usize },
    #[error("literal in clause {clause} refers to variable {var}, but the formula has {num_vars} variables")]
    UnknownVariable { clause: usize, var: usize, num_vars: usize },
    #[error("assignment covers {got} variables, the formula has {expected}")]
    AssignmentSize { got: usize, expected: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("generated graph is not acyclic: {0}")]
    ConstructionCycle(DagError),
    #[error(transparent)]
    Clustering(#[from] ClusteringError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}
