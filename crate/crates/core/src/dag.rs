//! Immutable DAG with node weights and delays.
//!
//! Nodes are dense indices `0..n`. Arcs keep their insertion order, which is
//! also the order in which [`ArcId`]s are assigned. All traversal helpers
//! break ties by lowest node id so results are reproducible.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::scalar::DelayScalar;

/// Node weight (cluster capacity is measured in the same unit).
pub type Weight = u64;

/// Dense node index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position of an arc in the DAG's arc list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub usize);

impl ArcId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A directed arc `tail -> head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
}

impl Arc {
    pub fn new(tail: usize, head: usize) -> Self {
        Arc {
            tail: NodeId(tail),
            head: NodeId(head),
        }
    }

    /// True when the two arcs share at least one endpoint.
    pub fn touches(&self, other: &Arc) -> bool {
        self.tail == other.tail || self.tail == other.head || self.head == other.tail || self.head == other.head
    }
}

/// Per-node input to [`Dag::new`].
#[derive(Clone, Debug, PartialEq)]
pub struct NodeAttrs<T> {
    pub weight: Weight,
    pub delay: T,
    pub label: Option<String>,
}

impl<T: DelayScalar> NodeAttrs<T> {
    /// Weight 1, zero delay, no label.
    pub fn unit() -> Self {
        NodeAttrs {
            weight: 1,
            delay: T::zero(),
            label: None,
        }
    }

    pub fn labeled(label: impl Into<String>) -> Self {
        NodeAttrs {
            label: Some(label.into()),
            ..Self::unit()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcProblem {
    EndpointOutOfRange,
    SelfLoop,
    Duplicate,
}

impl fmt::Display for ArcProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArcProblem::EndpointOutOfRange => "endpoint out of range",
            ArcProblem::SelfLoop => "self-loop",
            ArcProblem::Duplicate => "duplicate arc",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DagError {
    #[error("invalid arc #{index} ({tail} -> {head}): {problem}")]
    InvalidArc {
        index: usize,
        tail: usize,
        head: usize,
        problem: ArcProblem,
    },
    #[error("graph contains a directed cycle: {}", format_cycle(.cycle))]
    CycleDetected { cycle: Vec<NodeId> },
    #[error("more than {cap} source-to-sink paths")]
    PathExplosion { cap: u64 },
    #[error("node sequence is not a path: {0}")]
    NotAPath(String),
}

fn format_cycle(cycle: &[NodeId]) -> String {
    let mut parts: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
    if let Some(first) = cycle.first() {
        parts.push(first.to_string());
    }
    parts.join(" -> ")
}

/// A directed path, stored both as its node sequence and its arcs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    nodes: Vec<NodeId>,
    arcs: Vec<ArcId>,
}

impl Path {
    pub fn empty() -> Self {
        Path {
            nodes: Vec::new(),
            arcs: Vec::new(),
        }
    }

    pub fn single(v: NodeId) -> Self {
        Path {
            nodes: vec![v],
            arcs: Vec::new(),
        }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[ArcId] {
        &self.arcs
    }

    /// Number of arcs.
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    /// No arcs; a single-node path is empty.
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }
}

/// Undirected graph obtained by forgetting arc orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adjacency: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
}

impl SimpleGraph {
    /// Builds the graph from unordered pairs; orientation and repeats are dropped.
    pub fn from_pairs(node_count: usize, pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let mut edges: Vec<(NodeId, NodeId)> = pairs
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &edges {
            adjacency[u.0].push(v);
            adjacency[v.0].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        SimpleGraph { adjacency, edges }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Edges as `(low, high)` pairs in sorted order.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbours of `v` in increasing id order.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v.0]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v.0].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u.0 < self.adjacency.len() && self.adjacency[u.0].binary_search(&v).is_ok()
    }

    /// True when the graph is connected and has exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        let n = self.node_count();
        if n == 0 || self.edges.len() != n - 1 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![NodeId(0)];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w.0] {
                    seen[w.0] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n
    }
}

/// Validated, immutable DAG.
#[derive(Clone, Debug)]
pub struct Dag<T> {
    weights: Vec<Weight>,
    delays: Vec<T>,
    labels: Vec<Option<String>>,
    arcs: Vec<Arc>,
    out_arcs: Vec<Vec<ArcId>>,
    in_arcs: Vec<Vec<ArcId>>,
    arc_lookup: HashMap<(NodeId, NodeId), ArcId>,
    topo: Vec<NodeId>,
}

impl<T: PartialEq> PartialEq for Dag<T> {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights && self.delays == other.delays && self.labels == other.labels && self.arcs == other.arcs
    }
}

impl<T: DelayScalar> Dag<T> {
    /// Validates and builds a DAG. Arc order is preserved.
    pub fn new(nodes: Vec<NodeAttrs<T>>, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, DagError> {
        let n = nodes.len();
        let mut arc_list = Vec::new();
        let mut arc_lookup = HashMap::new();
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        for (index, (tail, head)) in arcs.into_iter().enumerate() {
            let problem = if tail >= n || head >= n {
                Some(ArcProblem::EndpointOutOfRange)
            } else if tail == head {
                Some(ArcProblem::SelfLoop)
            } else if arc_lookup.contains_key(&(NodeId(tail), NodeId(head))) {
                Some(ArcProblem::Duplicate)
            } else {
                None
            };
            if let Some(problem) = problem {
                return Err(DagError::InvalidArc {
                    index,
                    tail,
                    head,
                    problem,
                });
            }
            let id = ArcId(index);
            arc_lookup.insert((NodeId(tail), NodeId(head)), id);
            out_arcs[tail].push(id);
            in_arcs[head].push(id);
            arc_list.push(Arc::new(tail, head));
        }

        let topo = kahn_order(&arc_list, &out_arcs, &in_arcs)?;

        let mut weights = Vec::with_capacity(n);
        let mut delays = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for attrs in nodes {
            weights.push(attrs.weight);
            delays.push(attrs.delay);
            labels.push(attrs.label);
        }

        Ok(Dag {
            weights,
            delays,
            labels,
            arcs: arc_list,
            out_arcs,
            in_arcs,
            arc_lookup,
            topo,
        })
    }

    /// `n` unlabeled unit-weight, zero-delay nodes.
    pub fn unit(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, DagError> {
        Self::new((0..n).map(|_| NodeAttrs::unit()).collect(), arcs)
    }

    /// Node attributes in id order, suitable for feeding back into [`Dag::new`].
    pub fn node_attrs(&self) -> Vec<NodeAttrs<T>> {
        (0..self.node_count())
            .map(|i| NodeAttrs {
                weight: self.weights[i],
                delay: self.delays[i],
                label: self.labels[i].clone(),
            })
            .collect()
    }

    /// Same structure with node delays converted by `f`.
    pub fn map_delays<U: DelayScalar>(&self, f: impl Fn(T) -> U) -> Dag<U> {
        Dag {
            weights: self.weights.clone(),
            delays: self.delays.iter().map(|&x| f(x)).collect(),
            labels: self.labels.clone(),
            arcs: self.arcs.clone(),
            out_arcs: self.out_arcs.clone(),
            in_arcs: self.in_arcs.clone(),
            arc_lookup: self.arc_lookup.clone(),
            topo: self.topo.clone(),
        }
    }

    /// The sub-DAG induced by the nodes with `keep[v]` set, renumbered densely in
    /// increasing id order. Also returns the original id of each new node.
    pub fn induced(&self, keep: &[bool]) -> (Dag<T>, Vec<NodeId>) {
        let mut new_id = vec![usize::MAX; self.node_count()];
        let mut originals = Vec::new();
        let mut attrs = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                new_id[v] = originals.len();
                originals.push(NodeId(v));
                attrs.push(NodeAttrs {
                    weight: self.weights[v],
                    delay: self.delays[v],
                    label: self.labels[v].clone(),
                });
            }
        }
        let arcs: Vec<(usize, usize)> = self
            .arcs
            .iter()
            .filter(|a| keep[a.tail.0] && keep[a.head.0])
            .map(|a| (new_id[a.tail.0], new_id[a.head.0]))
            .collect();
        let dag = Dag::new(attrs, arcs).expect("induced subgraph of a DAG is a DAG");
        (dag, originals)
    }
}

fn kahn_order(arcs: &[Arc], out_arcs: &[Vec<ArcId>], in_arcs: &[Vec<ArcId>]) -> Result<Vec<NodeId>, DagError> {
    let n = out_arcs.len();
    let mut indegree: Vec<usize> = in_arcs.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(NodeId(v));
        for &a in &out_arcs[v] {
            let h = arcs[a.0].head.0;
            indegree[h] -= 1;
            if indegree[h] == 0 {
                ready.push(Reverse(h));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }

    // Every leftover node still has a leftover predecessor, so walking
    // backwards must eventually revisit a node.
    let start = (0..n).find(|&v| indegree[v] > 0).expect("leftover node");
    let mut position = HashMap::new();
    let mut walk = Vec::new();
    let mut v = start;
    loop {
        if let Some(&pos) = position.get(&v) {
            let mut cycle: Vec<NodeId> = walk[pos..].iter().map(|&u| NodeId(u)).collect();
            cycle.reverse();
            return Err(DagError::CycleDetected { cycle });
        }
        position.insert(v, walk.len());
        walk.push(v);
        v = in_arcs[v]
            .iter()
            .map(|a| arcs[a.0].tail.0)
            .find(|&t| indegree[t] > 0)
            .expect("leftover node has a leftover predecessor");
    }
}

impl<T> Dag<T> {
    pub fn node_count(&self) -> usize {
        self.weights.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count()).map(NodeId)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Arc {
        self.arcs[id.0]
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> {
        (0..self.arc_count()).map(ArcId)
    }

    pub fn arc_between(&self, tail: NodeId, head: NodeId) -> Option<ArcId> {
        self.arc_lookup.get(&(tail, head)).copied()
    }

    pub fn weight(&self, v: NodeId) -> Weight {
        self.weights[v.0]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn delay(&self, v: NodeId) -> &T {
        &self.delays[v.0]
    }

    pub fn delays(&self) -> &[T] {
        &self.delays
    }

    pub fn label(&self, v: NodeId) -> Option<&str> {
        self.labels[v.0].as_deref()
    }

    /// The label if present, otherwise the decimal id.
    pub fn display_name(&self, v: NodeId) -> String {
        self.label(v).map_or_else(|| v.to_string(), str::to_owned)
    }

    /// Looks a node up by label (first match).
    pub fn find_label(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l.as_deref() == Some(label)).map(NodeId)
    }

    pub fn out_arcs(&self, v: NodeId) -> &[ArcId] {
        &self.out_arcs[v.0]
    }

    pub fn in_arcs(&self, v: NodeId) -> &[ArcId] {
        &self.in_arcs[v.0]
    }

    pub fn is_source(&self, v: NodeId) -> bool {
        self.in_arcs[v.0].is_empty()
    }

    pub fn is_sink(&self, v: NodeId) -> bool {
        self.out_arcs[v.0].is_empty()
    }

    /// Fanin-0 nodes in id order. An isolated node is both a source and a sink.
    pub fn sources(&self) -> Vec<NodeId> {
        self.nodes().filter(|&v| self.is_source(v)).collect()
    }

    /// Fanout-0 nodes in id order.
    pub fn sinks(&self) -> Vec<NodeId> {
        self.nodes().filter(|&v| self.is_sink(v)).collect()
    }

    /// Topological order, lowest id first among ready nodes.
    pub fn topological_order(&self) -> &[NodeId] {
        &self.topo
    }

    /// Builds a [`Path`] from a node sequence, checking each step is an arc.
    pub fn path_from_nodes(&self, nodes: &[NodeId]) -> Result<Path, DagError> {
        let mut arcs = Vec::with_capacity(nodes.len().saturating_sub(1));
        for pair in nodes.windows(2) {
            let id = self
                .arc_between(pair[0], pair[1])
                .ok_or_else(|| DagError::NotAPath(format!("no arc {} -> {}", pair[0], pair[1])))?;
            arcs.push(id);
        }
        if let Some(&bad) = nodes.iter().find(|v| v.0 >= self.node_count()) {
            return Err(DagError::NotAPath(format!("node {bad} out of range")));
        }
        Ok(Path {
            nodes: nodes.to_vec(),
            arcs,
        })
    }

    /// A longest path (by arc count) using only arcs accepted by `allowed`.
    ///
    /// Among maximum-length paths the lexicographically smallest node
    /// sequence is returned. With no allowed arcs this is the single node 0;
    /// on an empty DAG it is the empty path.
    pub fn longest_path(&self, allowed: impl Fn(ArcId) -> bool) -> Path {
        let n = self.node_count();
        if n == 0 {
            return Path::empty();
        }
        // remaining[v] = longest allowed path starting at v
        let mut remaining = vec![0usize; n];
        for &v in self.topo.iter().rev() {
            remaining[v.0] = self.out_arcs[v.0]
                .iter()
                .filter(|&&a| allowed(a))
                .map(|&a| remaining[self.arcs[a.0].head.0] + 1)
                .max()
                .unwrap_or(0);
        }
        let best = remaining.iter().copied().max().unwrap_or(0);
        let start = remaining.iter().position(|&r| r == best).expect("non-empty");

        let mut nodes = vec![NodeId(start)];
        let mut arcs = Vec::with_capacity(best);
        let mut v = start;
        while remaining[v] > 0 {
            let want = remaining[v] - 1;
            let (arc, head) = self.out_arcs[v]
                .iter()
                .filter(|&&a| allowed(a))
                .map(|&a| (a, self.arcs[a.0].head.0))
                .filter(|&(_, h)| remaining[h] == want)
                .min_by_key(|&(_, h)| h)
                .expect("a successor continues the longest path");
            arcs.push(arc);
            nodes.push(NodeId(head));
            v = head;
        }
        Path { nodes, arcs }
    }

    /// Number of arcs on a longest path of the whole DAG.
    pub fn longest_path_len(&self) -> usize {
        self.longest_path(|_| true).len()
    }

    pub fn underlying_simple_graph(&self) -> SimpleGraph {
        SimpleGraph::from_pairs(self.node_count(), self.arcs.iter().map(|a| (a.tail, a.head)))
    }

    /// Number of source-to-sink paths, saturating at `u128::MAX`.
    pub fn st_path_count(&self) -> u128 {
        let mut count = vec![0u128; self.node_count()];
        for &v in self.topo.iter().rev() {
            count[v.0] = if self.is_sink(v) {
                1
            } else {
                self.out_arcs[v.0]
                    .iter()
                    .fold(0u128, |acc, a| acc.saturating_add(count[self.arcs[a.0].head.0]))
            };
        }
        self.nodes()
            .filter(|&v| self.is_source(v))
            .fold(0u128, |acc, v| acc.saturating_add(count[v.0]))
    }

    /// Iterates every source-to-sink path exactly once, in depth-first order
    /// (sources by id, out-arcs in insertion order).
    ///
    /// Fails up front when there are more than `cap` such paths.
    pub fn st_paths(&self, cap: u64) -> Result<StPaths<'_, T>, DagError> {
        if self.st_path_count() > u128::from(cap) {
            return Err(DagError::PathExplosion { cap });
        }
        let mut pending = self.sources();
        pending.reverse();
        Ok(StPaths {
            dag: self,
            pending,
            stack: Vec::new(),
            arcs: Vec::new(),
        })
    }
}

/// Iterator returned by [`Dag::st_paths`].
pub struct StPaths<'a, T> {
    dag: &'a Dag<T>,
    pending: Vec<NodeId>,
    stack: Vec<(NodeId, usize)>,
    arcs: Vec<ArcId>,
}

impl<T> StPaths<'_, T> {
    fn current(&self) -> Path {
        Path {
            nodes: self.stack.iter().map(|&(v, _)| v).collect(),
            arcs: self.arcs.clone(),
        }
    }
}

impl<T> Iterator for StPaths<'_, T> {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        loop {
            let Some(top) = self.stack.last_mut() else {
                let source = self.pending.pop()?;
                self.stack.push((source, 0));
                if self.dag.is_sink(source) {
                    let path = self.current();
                    self.stack.pop();
                    return Some(path);
                }
                continue;
            };
            let (v, next) = *top;
            let outs = self.dag.out_arcs(v);
            if next < outs.len() {
                top.1 += 1;
                let arc = outs[next];
                let head = self.dag.arc(arc).head;
                self.arcs.push(arc);
                self.stack.push((head, 0));
                if self.dag.is_sink(head) {
                    let path = self.current();
                    self.stack.pop();
                    self.arcs.pop();
                    return Some(path);
                }
            } else {
                self.stack.pop();
                if !self.stack.is_empty() {
                    self.arcs.pop();
                }
            }
        }
    }
}

/// Set of arc ids, used by solvers for labelling and masking.
pub type ArcSet = HashSet<ArcId>;
