//! Central-edge approximation for unit weights and capacity 2.
//!
//! Repeatedly take a longest path among the still unlabelled arcs, label its
//! central arc `d` (the pair becomes a cluster) and every unlabelled arc
//! touching it `D`, then mask all of them. The `d` arcs form a matching and
//! the resulting clustering is within a factor 2 of optimal.

use crate::clustering::{matching_to_clustering_unchecked, Clustering, Instance, Matching};
use crate::dag::{ArcId, Dag, Path};
use crate::scalar::DelayScalar;

use super::{require_unit_pairing, SolverError};

/// Which of the two middle arcs to take on an even-length path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TieBreakPolicy {
    /// Arc index `ceil(k/2) - 1`: the earlier middle arc.
    #[default]
    Lexicographic,
    /// Arc index `floor(k/2)`: the later middle arc.
    AdversarialCenterFirst,
}

/// One iteration of [`approx2`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxStep {
    pub path: Path,
    pub central_arc: ArcId,
    /// Arcs newly labelled in this step: the central arc first, then its
    /// newly `D`-labelled neighbours in id order.
    pub masked_arcs: Vec<ArcId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ApproxTrace {
    pub steps: Vec<ApproxStep>,
    /// Arcs labelled `d`, in the order they were chosen.
    pub d_arcs: Vec<ArcId>,
}

/// The central arc of a path with at least one arc.
pub fn central_arc(path: &Path, policy: TieBreakPolicy) -> Result<ArcId, SolverError> {
    let k = path.len();
    if k == 0 {
        return Err(SolverError::EmptyPath);
    }
    let index = match policy {
        TieBreakPolicy::Lexicographic => k.div_ceil(2) - 1,
        TieBreakPolicy::AdversarialCenterFirst => k / 2,
    };
    Ok(path.arcs()[index])
}

/// Runs the central-edge algorithm. Requires unit weights, capacity 2 and
/// zero node delays.
pub fn approx2<T: DelayScalar>(instance: &Instance<T>, policy: TieBreakPolicy) -> Result<(Clustering, ApproxTrace), SolverError> {
    require_unit_pairing(instance)?;
    let dag = &instance.dag;
    let trace = label_arcs(dag, policy);

    let mut matching = Matching::new();
    for &a in &trace.d_arcs {
        let arc = dag.arc(a);
        assert!(
            !matching
                .pairs()
                .any(|(u, v)| [u, v].contains(&arc.tail) || [u, v].contains(&arc.head)),
            "d-arcs must form a matching"
        );
        matching.insert_unchecked(arc.tail, arc.head);
    }
    Ok((matching_to_clustering_unchecked(dag.node_count(), &matching), trace))
}

fn label_arcs<T>(dag: &Dag<T>, policy: TieBreakPolicy) -> ApproxTrace {
    let mut labelled = vec![false; dag.arc_count()];
    let mut trace = ApproxTrace::default();
    loop {
        let path = dag.longest_path(|a| !labelled[a.0]);
        if path.is_empty() {
            break;
        }
        let central = central_arc(&path, policy).expect("path has arcs");
        let centre = dag.arc(central);
        labelled[central.0] = true;
        let mut masked = vec![central];
        for a in dag.arc_ids() {
            if !labelled[a.0] && dag.arc(a).touches(&centre) {
                labelled[a.0] = true;
                masked.push(a);
            }
        }
        trace.d_arcs.push(central);
        trace.steps.push(ApproxStep {
            path,
            central_arc: central,
            masked_arcs: masked,
        });
    }
    // Any unlabelled arc would itself be a path of length 1.
    debug_assert!(labelled.iter().all(|&l| l));
    trace
}

/// `ceil(l/2)·d + floor(l/2)·D` for the longest path length `l`: no clustering
/// with capacity 2 can do better on that path.
pub fn longest_path_lower_bound<T: DelayScalar>(instance: &Instance<T>) -> Result<T, SolverError> {
    require_unit_pairing(instance)?;
    let l = instance.dag.longest_path_len();
    let params = &instance.params;
    Ok(params.intra.times(l.div_ceil(2)) + params.inter.times(l / 2))
}
