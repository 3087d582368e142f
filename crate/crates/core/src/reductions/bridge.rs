use crate::caps::Caps;
use crate::clustering::{matching_to_clustering_unchecked, network_delay_unchecked, path_delay, DelayParams, Instance, Matching};
use crate::dag::{Dag, NodeAttrs};
use crate::scalar::DelayScalar;
use crate::solvers::for_each_maximal_matching;

use super::ReductionError;

/// Node labels of the bridge DAG, in node-id order.
pub const BRIDGE_LABELS: [&str; 10] = ["a", "b", "c", "e", "k", "f", "g", "h", "i", "j"];

/// Arcs of the bridge DAG as `(tail, head)` node ids.
pub const BRIDGE_ARCS: [(usize, usize); 12] = [
    (0, 1), // a → b
    (0, 2), // a → c
    (1, 3), // b → e
    (1, 4), // b → k
    (2, 5), // c → f
    (2, 6), // c → g
    (3, 7), // e → h
    (4, 7), // k → h
    (5, 8), // f → i
    (6, 8), // g → i
    (7, 9), // h → j
    (8, 9), // i → j
];

/// The 10-node bridge DAG with unit weights, zero node delays and capacity 2.
pub fn gen_bridge<T: DelayScalar>(intra: T, inter: T) -> Result<Instance<T>, ReductionError> {
    let nodes = BRIDGE_LABELS
        .iter()
        .map(|&l| NodeAttrs {
            weight: 1,
            delay: T::zero(),
            label: Some(l.to_string()),
        })
        .collect();
    let dag = Dag::new(nodes, BRIDGE_ARCS).map_err(ReductionError::ConstructionCycle)?;
    Ok(Instance::new(dag, DelayParams::new(intra, inter, 2)?)?)
}

/// Outcome of checking every maximal matching of the bridge DAG.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport<T> {
    pub matchings_checked: u64,
    /// `d + 3D`.
    pub expected: T,
    /// Smallest and largest network delay over all matchings.
    pub min_delay: T,
    pub max_delay: T,
    /// The first matching with a source-sink path of delay `4D`, or whose
    /// worst path is not exactly `d + 3D`.
    pub counterexample: Option<Matching>,
}

impl<T> LemmaReport<T> {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Clusters the bridge DAG by each of its maximal matchings and checks that
/// no source-sink path costs `4D` while the worst one costs exactly `d + 3D`.
/// Requires `0 < d < D`.
pub fn verify_bridge_lemma<T: DelayScalar>(intra: T, inter: T) -> Result<LemmaReport<T>, ReductionError> {
    if !(T::zero() < intra && intra < inter) {
        return Err(ReductionError::PreconditionViolated(format!(
            "bridge lemma needs 0 < d < D, got d = {intra}, D = {inter}"
        )));
    }
    let instance = gen_bridge(intra, inter)?;
    let dag = &instance.dag;
    let graph = dag.underlying_simple_graph();
    let paths: Vec<_> = dag.st_paths(Caps::default().paths).expect("four paths").collect();
    let expected = intra + inter.times(3);
    let all_inter = inter.times(4);

    let mut min_delay: Option<T> = None;
    let mut max_delay: Option<T> = None;
    let mut counterexample = None;
    let checked = for_each_maximal_matching(&graph, &Matching::new(), u64::MAX, |m| {
        let clustering = matching_to_clustering_unchecked(dag.node_count(), m);
        let delay = network_delay_unchecked(&instance, &clustering).delay;
        let has_all_inter = paths.iter().any(|p| path_delay(&instance, &clustering, p) == all_inter);
        min_delay = Some(min_delay.map_or(delay, |x: T| if delay < x { delay } else { x }));
        max_delay = Some(max_delay.map_or(delay, |x: T| x.max_of(delay)));
        if counterexample.is_none() && (has_all_inter || delay != expected) {
            counterexample = Some(m.clone());
        }
    })?;
    Ok(LemmaReport {
        matchings_checked: checked,
        expected,
        min_delay: min_delay.expect("at least one maximal matching"),
        max_delay: max_delay.expect("at least one maximal matching"),
        counterexample,
    })
}
