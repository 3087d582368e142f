//! Clusterings, the two-level delay model and feasibility checks.
//!
//! An arc whose endpoints share a cluster costs the intra-cluster delay `d`;
//! any other arc costs the inter-cluster delay `D`. The delay of a path is the
//! sum of its arc delays plus, when enabled, the delays of its nodes. The
//! network delay is the largest path delay over all source-to-sink paths.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::dag::{Arc, ArcId, Dag, NodeId, Path, SimpleGraph, Weight};
use crate::scalar::DelayScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClusteringError {
    #[error("clustering does not cover the instance's nodes: {0}")]
    NodeSetMismatch(String),
    #[error("capacity must be positive")]
    ZeroCapacity,
    #[error("inter-cluster delay {inter} is smaller than intra-cluster delay {intra}")]
    InterBelowIntra { intra: String, inter: String },
    #[error("not a matching: {0}")]
    NotAMatching(String),
    #[error("capacity {capacity} cannot hold a matched pair")]
    CapacityBelowPair { capacity: Weight },
    #[error("cluster {cluster} has {size} nodes; at most 2 allowed")]
    ClusterTooLarge { cluster: usize, size: usize },
    #[error("cluster {{{a}, {b}}} joins two non-adjacent nodes")]
    NonAdjacentPair { a: NodeId, b: NodeId },
}

/// Delay model parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DelayParams<T> {
    /// Delay of an arc inside a cluster (`d`).
    pub intra: T,
    /// Delay of an arc crossing clusters (`D`).
    pub inter: T,
    /// Upper bound on a cluster's total node weight.
    pub capacity: Weight,
    /// Whether node delays contribute to path delay.
    pub include_node_delays: bool,
}

impl<T: DelayScalar> DelayParams<T> {
    /// Checked constructor; node delays included.
    pub fn new(intra: T, inter: T, capacity: Weight) -> Result<Self, ClusteringError> {
        let params = DelayParams {
            intra,
            inter,
            capacity,
            include_node_delays: true,
        };
        params.check()?;
        Ok(params)
    }

    pub fn with_node_delays(mut self, include: bool) -> Self {
        self.include_node_delays = include;
        self
    }

    pub fn check(&self) -> Result<(), ClusteringError> {
        if self.capacity == 0 {
            return Err(ClusteringError::ZeroCapacity);
        }
        if self.inter < self.intra {
            return Err(ClusteringError::InterBelowIntra {
                intra: self.intra.to_string(),
                inter: self.inter.to_string(),
            });
        }
        Ok(())
    }
}

/// A DAG together with its delay model.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance<T> {
    pub dag: Dag<T>,
    pub params: DelayParams<T>,
}

impl<T: DelayScalar> Instance<T> {
    pub fn new(dag: Dag<T>, params: DelayParams<T>) -> Result<Self, ClusteringError> {
        params.check()?;
        Ok(Instance { dag, params })
    }

    /// Unit weights, capacity 2 and zero node delays: the setting of the
    /// matching-based solvers.
    pub fn is_unit_pairing(&self) -> bool {
        self.params.capacity == 2 && self.dag.weights().iter().all(|&w| w == 1) && self.dag.delays().iter().all(|d| d.is_zero())
    }
}

/// Assignment of every node to exactly one cluster.
///
/// Cluster ids are dense and numbered by first appearance in node order, so
/// two clusterings are equal exactly when they induce the same partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clustering {
    assignment: Vec<usize>,
    cluster_count: usize,
}

impl Clustering {
    /// Every node alone.
    pub fn singletons(node_count: usize) -> Self {
        Clustering {
            assignment: (0..node_count).collect(),
            cluster_count: node_count,
        }
    }

    /// Builds from arbitrary per-node labels, renumbering them densely.
    pub fn from_labels<L: Ord + Copy>(labels: &[L]) -> Self {
        let mut seen: BTreeMap<L, usize> = BTreeMap::new();
        let mut assignment = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = seen.len();
            assignment.push(*seen.entry(l).or_insert(next));
        }
        Clustering {
            assignment,
            cluster_count: seen.len(),
        }
    }

    /// Builds from explicit blocks, which must partition `0..node_count`.
    pub fn from_blocks(node_count: usize, blocks: &[Vec<NodeId>]) -> Result<Self, ClusteringError> {
        let mut labels = vec![usize::MAX; node_count];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(ClusteringError::NodeSetMismatch(format!("cluster {b} is empty")));
            }
            for &v in block {
                if v.0 >= node_count {
                    return Err(ClusteringError::NodeSetMismatch(format!(
                        "node {v} does not exist (instance has {node_count} nodes)"
                    )));
                }
                if labels[v.0] != usize::MAX {
                    return Err(ClusteringError::NodeSetMismatch(format!("node {v} appears in two clusters")));
                }
                labels[v.0] = b;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(ClusteringError::NodeSetMismatch(format!("node {v} is not in any cluster")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    pub fn cluster_of(&self, v: NodeId) -> usize {
        self.assignment[v.0]
    }

    pub fn same_cluster(&self, u: NodeId, v: NodeId) -> bool {
        self.assignment[u.0] == self.assignment[v.0]
    }

    /// Blocks in cluster-id order, members in increasing id order.
    pub fn blocks(&self) -> Vec<Vec<NodeId>> {
        let mut blocks = vec![Vec::new(); self.cluster_count];
        for (v, &c) in self.assignment.iter().enumerate() {
            blocks[c].push(NodeId(v));
        }
        blocks
    }

    fn check_covers<T>(&self, dag: &Dag<T>) -> Result<(), ClusteringError> {
        if self.node_count() != dag.node_count() {
            return Err(ClusteringError::NodeSetMismatch(format!(
                "clustering has {} nodes, instance has {}",
                self.node_count(),
                dag.node_count()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityViolation {
    pub cluster: usize,
    pub weight: Weight,
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub capacity: Weight,
    pub violations: Vec<CapacityViolation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every cluster whose weight exceeds the capacity.
pub fn validate<T: DelayScalar>(instance: &Instance<T>, clustering: &Clustering) -> Result<FeasibilityReport, ClusteringError> {
    clustering.check_covers(&instance.dag)?;
    let mut weights = vec![0 as Weight; clustering.cluster_count()];
    for v in instance.dag.nodes() {
        weights[clustering.cluster_of(v)] += instance.dag.weight(v);
    }
    let violations = weights
        .into_iter()
        .enumerate()
        .filter(|&(_, w)| w > instance.params.capacity)
        .map(|(cluster, weight)| CapacityViolation { cluster, weight })
        .collect();
    Ok(FeasibilityReport {
        capacity: instance.params.capacity,
        violations,
    })
}

/// `d` when both endpoints share a cluster, `D` otherwise.
pub fn arc_delay<T: DelayScalar>(clustering: &Clustering, arc: Arc, params: &DelayParams<T>) -> T {
    if clustering.same_cluster(arc.tail, arc.head) {
        params.intra
    } else {
        params.inter
    }
}

/// Network delay plus one path attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct DelayReport<T> {
    pub delay: T,
    pub critical_path: Path,
}

/// Delay of one path under `clustering`.
pub fn path_delay<T: DelayScalar>(instance: &Instance<T>, clustering: &Clustering, path: &Path) -> T {
    let params = &instance.params;
    let mut total = T::zero();
    if params.include_node_delays {
        for &v in path.nodes() {
            total = total + *instance.dag.delay(v);
        }
    }
    for &a in path.arcs() {
        total = total + arc_delay(clustering, instance.dag.arc(a), params);
    }
    total
}

/// Maximum source-to-sink path delay, by dynamic programming in topological order.
///
/// Capacity is not checked, so infeasible clusterings can be scored too.
/// Ties for the critical path go to the lowest-id sink and, walking back,
/// the lowest-id predecessor.
pub fn network_delay<T: DelayScalar>(instance: &Instance<T>, clustering: &Clustering) -> Result<DelayReport<T>, ClusteringError> {
    clustering.check_covers(&instance.dag)?;
    Ok(network_delay_unchecked(instance, clustering))
}

pub(crate) fn network_delay_unchecked<T: DelayScalar>(instance: &Instance<T>, clustering: &Clustering) -> DelayReport<T> {
    let dag = &instance.dag;
    let params = &instance.params;
    let n = dag.node_count();
    if n == 0 {
        return DelayReport {
            delay: T::zero(),
            critical_path: Path::empty(),
        };
    }
    let node_delay = |v: NodeId| {
        if params.include_node_delays {
            *dag.delay(v)
        } else {
            T::zero()
        }
    };
    let mut arrival: Vec<T> = vec![T::zero(); n];
    let mut pred: Vec<Option<(NodeId, ArcId)>> = vec![None; n];
    for &v in dag.topological_order() {
        let mut best: Option<(T, NodeId, ArcId)> = None;
        for &a in dag.in_arcs(v) {
            let arc = dag.arc(a);
            let candidate = arrival[arc.tail.0] + arc_delay(clustering, arc, params);
            let better = match best {
                None => true,
                Some((value, tail, _)) => candidate > value || (candidate == value && arc.tail < tail),
            };
            if better {
                best = Some((candidate, arc.tail, a));
            }
        }
        arrival[v.0] = match best {
            Some((value, tail, arc)) => {
                pred[v.0] = Some((tail, arc));
                node_delay(v) + value
            }
            None => node_delay(v),
        };
    }

    let mut end = None;
    for v in dag.nodes().filter(|&v| dag.is_sink(v)) {
        match end {
            None => end = Some(v),
            Some(e) if arrival[v.0] > arrival[e.0] => end = Some(v),
            _ => {}
        }
    }
    let end = end.expect("a non-empty DAG has a sink");
    let mut nodes = vec![end];
    let mut v = end;
    while let Some((tail, _)) = pred[v.0] {
        nodes.push(tail);
        v = tail;
    }
    nodes.reverse();
    let critical_path = dag.path_from_nodes(&nodes).expect("back-pointers follow arcs");
    DelayReport {
        delay: arrival[end.0],
        critical_path,
    }
}

/// Pairwise-disjoint unordered node pairs, each stored as `(low, high)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    pairs: BTreeSet<(NodeId, NodeId)>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    /// Checks disjointness and that every pair is an edge of `graph`.
    pub fn from_pairs(graph: &SimpleGraph, pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self, ClusteringError> {
        let mut used = vec![false; graph.node_count()];
        let mut matching = Matching::new();
        for (u, v) in pairs {
            if u.0 >= graph.node_count() || v.0 >= graph.node_count() {
                return Err(ClusteringError::NotAMatching(format!("pair ({u}, {v}) is out of range")));
            }
            if !graph.has_edge(u, v) {
                return Err(ClusteringError::NotAMatching(format!("({u}, {v}) is not an edge")));
            }
            if used[u.0] || used[v.0] {
                return Err(ClusteringError::NotAMatching(format!("pair ({u}, {v}) reuses a matched node")));
            }
            used[u.0] = true;
            used[v.0] = true;
            matching.insert_unchecked(u, v);
        }
        Ok(matching)
    }

    pub(crate) fn insert_unchecked(&mut self, u: NodeId, v: NodeId) {
        let pair = if u < v { (u, v) } else { (v, u) };
        self.pairs.insert(pair);
    }

    pub(crate) fn remove_unchecked(&mut self, u: NodeId, v: NodeId) {
        let pair = if u < v { (u, v) } else { (v, u) };
        self.pairs.remove(&pair);
    }

    pub fn pairs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, u: NodeId, v: NodeId) -> bool {
        let pair = if u < v { (u, v) } else { (v, u) };
        self.pairs.contains(&pair)
    }

    /// True when no edge of `graph` has both endpoints unmatched.
    pub fn is_maximal_in(&self, graph: &SimpleGraph) -> bool {
        let mut used = vec![false; graph.node_count()];
        for (u, v) in self.pairs() {
            used[u.0] = true;
            used[v.0] = true;
        }
        graph.edges().iter().all(|&(u, v)| used[u.0] || used[v.0])
    }
}

/// Matched pairs become two-node clusters, every other node a singleton.
pub fn matching_to_clustering<T: DelayScalar>(instance: &Instance<T>, matching: &Matching) -> Result<Clustering, ClusteringError> {
    if instance.params.capacity < 2 {
        return Err(ClusteringError::CapacityBelowPair {
            capacity: instance.params.capacity,
        });
    }
    let graph = instance.dag.underlying_simple_graph();
    Matching::from_pairs(&graph, matching.pairs())?;
    Ok(matching_to_clustering_unchecked(instance.dag.node_count(), matching))
}

pub(crate) fn matching_to_clustering_unchecked(node_count: usize, matching: &Matching) -> Clustering {
    let mut labels: Vec<usize> = (0..node_count).collect();
    for (u, v) in matching.pairs() {
        labels[v.0] = u.0;
    }
    Clustering::from_labels(&labels)
}

/// Inverse of [`matching_to_clustering`] for clusterings with blocks of size at most two.
pub fn clustering_to_matching<T: DelayScalar>(instance: &Instance<T>, clustering: &Clustering) -> Result<Matching, ClusteringError> {
    clustering.check_covers(&instance.dag)?;
    let graph = instance.dag.underlying_simple_graph();
    let mut matching = Matching::new();
    for (cluster, block) in clustering.blocks().into_iter().enumerate() {
        match block.as_slice() {
            [_] => {}
            [a, b] => {
                if !graph.has_edge(*a, *b) {
                    return Err(ClusteringError::NonAdjacentPair { a: *a, b: *b });
                }
                matching.insert_unchecked(*a, *b);
            }
            _ => {
                return Err(ClusteringError::ClusterTooLarge {
                    cluster,
                    size: block.len(),
                })
            }
        }
    }
    Ok(matching)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::NodeAttrs;

    fn ids(v: &[usize]) -> Vec<NodeId> {
        v.iter().map(|&i| NodeId(i)).collect()
    }

    fn chain_instance(arcs: usize, intra: u64, inter: u64) -> Instance<u64> {
        let dag = Dag::unit(arcs + 1, (1..=arcs).map(|i| (i - 1, i))).unwrap();
        Instance::new(dag, DelayParams::new(intra, inter, 2).unwrap()).unwrap()
    }

    /// s, a, b, c, d, t = 0..5 with unit weights and delays.
    fn fig2(intra: u64, inter: u64, node_delay: u64) -> Instance<u64> {
        let nodes = ["s", "a", "b", "c", "d", "t"]
            .iter()
            .map(|l| NodeAttrs {
                weight: 1,
                delay: node_delay,
                label: Some(l.to_string()),
            })
            .collect();
        let arcs = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)];
        Instance::new(Dag::new(nodes, arcs).unwrap(), DelayParams::new(intra, inter, 2).unwrap()).unwrap()
    }

    fn sigma() -> Clustering {
        Clustering::from_blocks(6, &[ids(&[0, 1]), ids(&[2, 4]), ids(&[3, 5])]).unwrap()
    }

    #[test]
    fn from_blocks_rejects_bad_covers() {
        assert!(Clustering::from_blocks(3, &[ids(&[0, 1])]).is_err());
        assert!(Clustering::from_blocks(2, &[ids(&[0, 1]), ids(&[1])]).is_err());
        assert!(Clustering::from_blocks(2, &[ids(&[0, 1, 2])]).is_err());
        assert_eq!(Clustering::from_blocks(0, &[]).unwrap().cluster_count(), 0);
    }

    #[test]
    fn fig2_clustering_is_feasible() {
        let inst = fig2(1, 2, 1);
        assert!(validate(&inst, &sigma()).unwrap().is_feasible());
    }

    #[test]
    fn over_capacity_is_reported() {
        let inst = fig2(1, 2, 1);
        let c = Clustering::from_blocks(6, &[ids(&[0, 1, 2]), ids(&[3, 4]), ids(&[5])]).unwrap();
        let report = validate(&inst, &c).unwrap();
        assert_eq!(report.violations, vec![CapacityViolation { cluster: 0, weight: 3 }]);
    }

    #[test]
    fn validate_rejects_wrong_node_count() {
        let inst = fig2(1, 2, 1);
        assert!(matches!(
            validate(&inst, &Clustering::singletons(5)),
            Err(ClusteringError::NodeSetMismatch(_))
        ));
    }

    #[test]
    fn arc_delays() {
        let c = Clustering::from_blocks(3, &[ids(&[0, 1]), ids(&[2])]).unwrap();
        let p = DelayParams::new(1u64, 2, 2).unwrap();
        assert_eq!(arc_delay(&c, Arc::new(0, 1), &p), 1);
        assert_eq!(arc_delay(&c, Arc::new(1, 2), &p), 2);
        let flat = DelayParams::new(1u64, 1, 2).unwrap();
        assert_eq!(arc_delay(&c, Arc::new(0, 1), &flat), 1);
        assert_eq!(arc_delay(&c, Arc::new(1, 2), &flat), 1);
    }

    #[test]
    fn params_checked() {
        assert_eq!(DelayParams::new(1u64, 2, 0).unwrap_err(), ClusteringError::ZeroCapacity);
        assert!(DelayParams::new(3u64, 2, 2).is_err());
    }

    #[test]
    fn chain_delays() {
        let inst = chain_instance(3, 1, 2);
        let r = network_delay(&inst, &Clustering::singletons(4)).unwrap();
        assert_eq!(r.delay, 6);
        assert_eq!(r.critical_path.len(), 3);
        let centre = Clustering::from_blocks(4, &[ids(&[0]), ids(&[1, 2]), ids(&[3])]).unwrap();
        assert_eq!(network_delay(&inst, &centre).unwrap().delay, 5);
    }

    /// Hand sums over the four s-t paths (4 node delays + 3 arcs each):
    /// s-a-c-t = 8, s-a-d-t = s-b-c-t = s-b-d-t = 9.
    #[test]
    fn fig2_delay_with_node_delays() {
        let inst = fig2(1, 2, 1);
        let r = network_delay(&inst, &sigma()).unwrap();
        // s-b-d-t: 4 node delays + D + d + D = 9
        assert_eq!(r.delay, 9);
        let oracle = inst
            .dag
            .st_paths(100)
            .unwrap()
            .map(|p| path_delay(&inst, &sigma(), &p))
            .max()
            .unwrap();
        assert_eq!(r.delay, oracle);
        assert_eq!(path_delay(&inst, &sigma(), &r.critical_path), r.delay);
    }

    #[test]
    fn matching_round_trip() {
        let inst = chain_instance(3, 1, 2);
        let empty = matching_to_clustering(&inst, &Matching::new()).unwrap();
        assert_eq!(empty, Clustering::singletons(4));
        assert!(clustering_to_matching(&inst, &empty).unwrap().is_empty());

        let g = inst.dag.underlying_simple_graph();
        let m = Matching::from_pairs(&g, [(NodeId(1), NodeId(2))]).unwrap();
        let c = matching_to_clustering(&inst, &m).unwrap();
        assert_eq!(c, Clustering::from_blocks(4, &[ids(&[1, 2]), ids(&[0]), ids(&[3])]).unwrap());
        assert_eq!(clustering_to_matching(&inst, &c).unwrap(), m);
    }

    #[test]
    fn fig2_matching_gives_sigma() {
        let inst = fig2(1, 2, 1);
        let g = inst.dag.underlying_simple_graph();
        let m = Matching::from_pairs(&g, [(NodeId(0), NodeId(1)), (NodeId(2), NodeId(4)), (NodeId(3), NodeId(5))]).unwrap();
        assert_eq!(matching_to_clustering(&inst, &m).unwrap(), sigma());
    }

    #[test]
    fn matching_errors() {
        let inst = chain_instance(3, 1, 2);
        let g = inst.dag.underlying_simple_graph();
        assert!(Matching::from_pairs(&g, [(NodeId(0), NodeId(2))]).is_err());
        assert!(Matching::from_pairs(&g, [(NodeId(0), NodeId(1)), (NodeId(1), NodeId(2))]).is_err());
        let far = Clustering::from_blocks(4, &[ids(&[0, 3]), ids(&[1]), ids(&[2])]).unwrap();
        assert_eq!(
            clustering_to_matching(&inst, &far).unwrap_err(),
            ClusteringError::NonAdjacentPair {
                a: NodeId(0),
                b: NodeId(3)
            }
        );
        let big = Clustering::from_blocks(4, &[ids(&[0, 1, 2]), ids(&[3])]).unwrap();
        assert!(matches!(
            clustering_to_matching(&inst, &big),
            Err(ClusteringError::ClusterTooLarge { size: 3, .. })
        ));
    }

    #[test]
    fn capacity_one_cannot_pair() {
        let dag = Dag::<u64>::unit(2, [(0, 1)]).unwrap();
        let inst = Instance::new(dag, DelayParams::new(1, 2, 1).unwrap()).unwrap();
        assert!(matches!(
            matching_to_clustering(&inst, &Matching::new()),
            Err(ClusteringError::CapacityBelowPair { capacity: 1 })
        ));
    }

    #[test]
    fn flat_delays_ignore_clustering() {
        let inst = Instance::new(fig2(1, 1, 0).dag, DelayParams::new(3u64, 3, 2).unwrap().with_node_delays(false)).unwrap();
        for c in [Clustering::singletons(6), sigma()] {
            assert_eq!(network_delay(&inst, &c).unwrap().delay, 3 * 3);
        }
    }
}
