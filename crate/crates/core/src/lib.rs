//! Clustering the nodes of a DAG into capacity-bounded clusters, without
//! replicating any node, so that the worst source-to-sink delay is minimal.
//!
//! Arcs inside a cluster cost the intra-cluster delay `d`, arcs between
//! clusters cost the inter-cluster delay `D`. The crate provides
//!
//! * [`dag`]: the validated DAG type and path utilities,
//! * [`clustering`]: clusterings, feasibility and delay evaluation,
//! * [`solvers`]: the central-edge 2-approximation, an exact tree algorithm
//!   and exhaustive optima,
//! * [`reductions`]: the PARTITION and 3-SAT hardness gadgets with decoders,
//! * [`io`]: JSON instance/clustering files and DIMACS CNF input.
//!
//! All core types are generic over the delay scalar ([`DelayScalar`]). The
//! aliases below fix it to `u64`, which is what the file formats use.

pub mod caps;
pub mod clustering;
pub mod dag;
pub mod io;
pub mod random;
pub mod reductions;
pub mod scalar;
pub mod solvers;

pub use caps::Caps;
pub use dag::{Arc, ArcId, NodeAttrs, NodeId, Path, SimpleGraph, Weight};
pub use scalar::DelayScalar;

/// Delay scalar used by the file formats and the CLI.
pub type Delay = u64;

pub type Dag = dag::Dag<Delay>;
pub type Instance = clustering::Instance<Delay>;
pub type DelayParams = clustering::DelayParams<Delay>;
pub type DelayReport = clustering::DelayReport<Delay>;
pub use clustering::{Clustering, FeasibilityReport, Matching};

/// Floating-point variants, for experiments with non-integral delays.
pub type DagF64 = dag::Dag<f64>;
pub type InstanceF64 = clustering::Instance<f64>;
pub type DelayParamsF64 = clustering::DelayParams<f64>;
