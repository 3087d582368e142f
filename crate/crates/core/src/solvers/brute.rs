use crate::clustering::{matching_to_clustering_unchecked, network_delay_unchecked, Clustering, DelayReport, Instance, Matching};
use crate::dag::{NodeId, Weight};
use crate::scalar::DelayScalar;

use super::{for_each_maximal_matching, require_unit_pairing, SolverError};

/// Minimum-delay clustering by exhaustive search over capacity-feasible set partitions.
///
/// Partitions are generated as restricted growth strings in lexicographic
/// order, pruning any block that would exceed the capacity and any partial
/// assignment whose optimistic delay (undecided arcs priced at `d`) already
/// reaches the best complete one. The first partition reaching the minimum
/// wins ties.
pub fn brute_force_opt<T: DelayScalar>(instance: &Instance<T>, node_cap: usize) -> Result<(Clustering, DelayReport<T>), SolverError> {
    let dag = &instance.dag;
    let n = dag.node_count();
    if n > node_cap {
        return Err(SolverError::TooLarge { nodes: n, cap: node_cap });
    }
    if let Some(v) = dag.nodes().find(|&v| dag.weight(v) > instance.params.capacity) {
        return Err(SolverError::NoFeasibleClustering { node: v });
    }
    let mut search = PartitionSearch {
        instance,
        labels: vec![UNASSIGNED; n],
        block_weights: Vec::with_capacity(n),
        arrival: vec![T::zero(); n],
        best: None,
    };
    search.descend(0);
    let (labels, _) = search.best.expect("all-singletons is always feasible here");
    let clustering = Clustering::from_labels(&labels);
    let report = network_delay_unchecked(instance, &clustering);
    Ok((clustering, report))
}

const UNASSIGNED: usize = usize::MAX;

struct PartitionSearch<'a, T> {
    instance: &'a Instance<T>,
    labels: Vec<usize>,
    block_weights: Vec<Weight>,
    arrival: Vec<T>,
    best: Option<(Vec<usize>, T)>,
}

impl<T: DelayScalar> PartitionSearch<'_, T> {
    /// Longest path delay with arcs between assigned nodes priced exactly
    /// and every other arc priced at `d`. Exact once all nodes are assigned.
    fn optimistic_delay(&mut self) -> T {
        let dag = &self.instance.dag;
        let params = &self.instance.params;
        let mut worst = T::zero();
        for &v in dag.topological_order() {
            let mut best_in: Option<T> = None;
            for &a in dag.in_arcs(v) {
                let tail = dag.arc(a).tail;
                let (lt, lh) = (self.labels[tail.0], self.labels[v.0]);
                let cost = if lt == UNASSIGNED || lh == UNASSIGNED || lt == lh {
                    params.intra
                } else {
                    params.inter
                };
                let candidate = self.arrival[tail.0] + cost;
                best_in = Some(best_in.map_or(candidate, |b| b.max_of(candidate)));
            }
            let own = if params.include_node_delays { *dag.delay(v) } else { T::zero() };
            let value = own + best_in.unwrap_or_else(T::zero);
            self.arrival[v.0] = value;
            worst = worst.max_of(value);
        }
        worst
    }

    fn descend(&mut self, v: usize) {
        let bound = self.optimistic_delay();
        if let Some((_, best)) = &self.best {
            if bound.partial_cmp(best) != Some(std::cmp::Ordering::Less) {
                return;
            }
        }
        if v == self.labels.len() {
            self.best = Some((self.labels.clone(), bound));
            return;
        }
        let w = self.instance.dag.weight(NodeId(v));
        let capacity = self.instance.params.capacity;
        for block in 0..self.block_weights.len() {
            if self.block_weights[block] + w <= capacity {
                self.block_weights[block] += w;
                self.labels[v] = block;
                self.descend(v + 1);
                self.block_weights[block] -= w;
            }
        }
        self.labels[v] = self.block_weights.len();
        self.block_weights.push(w);
        self.descend(v + 1);
        self.block_weights.pop();
        self.labels[v] = UNASSIGNED;
    }
}

/// Minimum-delay clustering among those induced by maximal matchings of the
/// underlying simple graph. Requires unit weights, capacity 2 and zero node delays.
pub fn brute_force_matching_opt<T: DelayScalar>(
    instance: &Instance<T>,
    matching_cap: u64,
) -> Result<(Clustering, DelayReport<T>), SolverError> {
    require_unit_pairing(instance)?;
    let graph = instance.dag.underlying_simple_graph();
    let n = instance.dag.node_count();
    let mut best: Option<(Clustering, DelayReport<T>)> = None;
    for_each_maximal_matching(&graph, &Matching::new(), matching_cap, |m| {
        let clustering = matching_to_clustering_unchecked(n, m);
        let report = network_delay_unchecked(instance, &clustering);
        if best.as_ref().is_none_or(|(_, b)| report.delay < b.delay) {
            best = Some((clustering, report));
        }
    })?;
    Ok(best.expect("every graph has at least one maximal matching"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::{validate, DelayParams};
    use crate::dag::Dag;

    fn unit_instance(n: usize, arcs: &[(usize, usize)], intra: u64, inter: u64) -> Instance<u64> {
        let dag = Dag::unit(n, arcs.iter().copied()).unwrap();
        Instance::new(dag, DelayParams::new(intra, inter, 2).unwrap()).unwrap()
    }

    #[test]
    fn single_arc() {
        let inst = unit_instance(2, &[(0, 1)], 1, 2);
        let (c, r) = brute_force_opt(&inst, 12).unwrap();
        assert_eq!(r.delay, 1);
        assert_eq!(c.cluster_count(), 1);
    }

    #[test]
    fn three_arc_chain_optimum() {
        let inst = unit_instance(4, &[(0, 1), (1, 2), (2, 3)], 1, 2);
        let (c, r) = brute_force_opt(&inst, 12).unwrap();
        assert_eq!(r.delay, 4);
        assert!(c.same_cluster(NodeId(0), NodeId(1)) && c.same_cluster(NodeId(2), NodeId(3)));
        let (_, r) = brute_force_matching_opt(&inst, 1000).unwrap();
        assert_eq!(r.delay, 4);
    }

    #[test]
    fn single_node() {
        let inst = unit_instance(1, &[], 1, 2);
        assert_eq!(brute_force_opt(&inst, 12).unwrap().1.delay, 0);
        let (c, r) = brute_force_matching_opt(&inst, 10).unwrap();
        assert_eq!(r.delay, 0);
        assert_eq!(c, Clustering::singletons(1));
    }

    #[test]
    fn guards() {
        let inst = unit_instance(13, &[], 1, 2);
        assert_eq!(
            brute_force_opt(&inst, 12).unwrap_err(),
            SolverError::TooLarge { nodes: 13, cap: 12 }
        );
        let heavy = Dag::new(
            vec![crate::dag::NodeAttrs {
                weight: 3,
                delay: 0u64,
                label: None,
            }],
            [],
        )
        .unwrap();
        let inst = Instance::new(heavy, DelayParams::new(1, 2, 2).unwrap()).unwrap();
        assert!(matches!(brute_force_opt(&inst, 12), Err(SolverError::NoFeasibleClustering { .. })));
    }

    #[test]
    fn result_respects_capacity_for_weighted_nodes() {
        let nodes = [2u64, 1, 1, 2]
            .iter()
            .map(|&w| crate::dag::NodeAttrs {
                weight: w,
                delay: 0u64,
                label: None,
            })
            .collect();
        let dag = Dag::new(nodes, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let inst = Instance::new(dag, DelayParams::new(0, 1, 3).unwrap()).unwrap();
        let (c, r) = brute_force_opt(&inst, 12).unwrap();
        assert!(validate(&inst, &c).unwrap().is_feasible());
        assert_eq!(r.delay, 1);
    }
}
