//! Exact clustering when the underlying simple graph is a tree (unit weights,
//! capacity 2, zero node delays).
//!
//! Clusterings are matchings of the tree. For a delay bound `B` a bottom-up
//! pass over the tree rooted at node 0 decides whether some matching keeps
//! every path within `B`. For each node `v` and each of "paired with its
//! parent" / "not paired with its parent" it keeps the Pareto-minimal pairs
//! `(A, L)`, where `A` is the longest path inside the subtree ending at `v`
//! and `L` the longest one starting at `v`. A path through `v` enters from one
//! child and leaves to another, so `A + L <= B` covers all of them.
//!
//! The optimum is one of the values `a·d + b·D` with `a + b` at most the
//! longest path length, so a binary search over those values finds it. A
//! matching reaching it is then fixed edge by edge: pair an edge if the bound
//! stays reachable, otherwise split it.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::clustering::{matching_to_clustering_unchecked, network_delay_unchecked, Clustering, DelayReport, Instance, Matching};
use crate::dag::NodeId;
use crate::scalar::DelayScalar;

use super::{require_unit_pairing, SolverError};

pub fn tree_exact<T: DelayScalar>(instance: &Instance<T>) -> Result<(Clustering, DelayReport<T>), SolverError> {
    require_unit_pairing(instance)?;
    let graph = instance.dag.underlying_simple_graph();
    if !graph.is_tree() {
        return Err(SolverError::NotATree);
    }
    let n = instance.dag.node_count();
    let dp = TreeDp::new(instance);

    let l = instance.dag.longest_path_len();
    let params = &instance.params;
    let mut candidates: Vec<T> = (0..=l)
        .flat_map(|a| (0..=l - a).map(move |b| params.intra.times(a) + params.inter.times(b)))
        .collect();
    candidates.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    candidates.dedup();

    let mut rules = vec![EdgeRule::Free; n];
    // every path costs at most l·D with all singletons, so the last candidate is feasible
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if dp.feasible(candidates[mid], &rules) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let bound = candidates[lo];

    let mut matching = Matching::new();
    for v in 0..n {
        let Some(p) = dp.parent[v] else { continue };
        rules[v] = EdgeRule::Paired;
        if dp.feasible(bound, &rules) {
            matching.insert_unchecked(NodeId(v), p);
        } else {
            rules[v] = EdgeRule::Split;
        }
    }
    let clustering = matching_to_clustering_unchecked(n, &matching);
    let report = network_delay_unchecked(instance, &clustering);
    debug_assert!(report.delay == bound);
    Ok((clustering, report))
}

/// Constraint on the edge between a node and its parent.
#[derive(Clone, Copy, PartialEq, Eq)]
enum EdgeRule {
    Free,
    Paired,
    Split,
}

struct Child {
    node: usize,
    /// The arc points from the child to its parent.
    incoming: bool,
}

struct Front<T> {
    paired_up: Vec<(T, T)>,
    free: Vec<(T, T)>,
}

struct TreeDp<T> {
    intra: T,
    inter: T,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<Child>>,
    /// Children before parents.
    post_order: Vec<usize>,
}

impl<T: DelayScalar> TreeDp<T> {
    fn new(instance: &Instance<T>) -> Self {
        let dag = &instance.dag;
        let graph = dag.underlying_simple_graph();
        let n = dag.node_count();
        let mut parent = vec![None; n];
        let mut children: Vec<Vec<Child>> = (0..n).map(|_| Vec::new()).collect();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        if n > 0 {
            seen[0] = true;
            queue.push_back(0);
        }
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in graph.neighbors(NodeId(v)) {
                if !seen[u.0] {
                    seen[u.0] = true;
                    parent[u.0] = Some(NodeId(v));
                    children[v].push(Child {
                        node: u.0,
                        incoming: dag.arc_between(u, NodeId(v)).is_some(),
                    });
                    queue.push_back(u.0);
                }
            }
        }
        order.reverse();
        TreeDp {
            intra: instance.params.intra,
            inter: instance.params.inter,
            parent,
            children,
            post_order: order,
        }
    }

    fn feasible(&self, bound: T, rules: &[EdgeRule]) -> bool {
        let mut fronts: Vec<Front<T>> = (0..self.parent.len())
            .map(|_| Front {
                paired_up: Vec::new(),
                free: Vec::new(),
            })
            .collect();
        for &v in &self.post_order {
            let free = self.combine(v, false, bound, rules, &fronts);
            let paired_up = if self.parent[v].is_some() {
                self.combine(v, true, bound, rules, &fronts)
            } else {
                Vec::new()
            };
            fronts[v] = Front { paired_up, free };
        }
        self.parent.is_empty() || !fronts[0].free.is_empty()
    }

    /// Pareto front of `(A, L)` at `v` once all children are attached.
    /// `partner_taken` says whether `v` is already paired with its parent.
    fn combine(&self, v: usize, partner_taken: bool, bound: T, rules: &[EdgeRule], fronts: &[Front<T>]) -> Vec<(T, T)> {
        let mut front = vec![(T::zero(), T::zero(), partner_taken)];
        for child in &self.children[v] {
            let rule = rules[child.node];
            let mut next = Vec::new();
            for &(a, l, taken) in &front {
                if !taken && rule != EdgeRule::Split {
                    for &(ca, cl) in &fronts[child.node].paired_up {
                        extend(&mut next, (a, l, true), child.incoming, ca, cl, self.intra, bound);
                    }
                }
                if rule != EdgeRule::Paired {
                    for &(ca, cl) in &fronts[child.node].free {
                        extend(&mut next, (a, l, taken), child.incoming, ca, cl, self.inter, bound);
                    }
                }
            }
            front = prune(next);
            if front.is_empty() {
                return Vec::new();
            }
        }
        prune(front.into_iter().map(|(a, l, _)| (a, l, false)).collect())
            .into_iter()
            .map(|(a, l, _)| (a, l))
            .collect()
    }
}

fn extend<T: DelayScalar>(out: &mut Vec<(T, T, bool)>, state: (T, T, bool), incoming: bool, ca: T, cl: T, cost: T, bound: T) {
    let (a, l, taken) = state;
    if incoming {
        let arriving = ca + cost;
        if arriving <= bound && arriving + l <= bound {
            out.push((a.max_of(arriving), l, taken));
        }
    } else {
        let leaving = cost + cl;
        if leaving <= bound && a + leaving <= bound {
            out.push((a, l.max_of(leaving), taken));
        }
    }
}

/// Drops states dominated in both delays by a state whose partner slot is at
/// least as free.
fn prune<T: DelayScalar>(states: Vec<(T, T, bool)>) -> Vec<(T, T, bool)> {
    let dominates = |q: &(T, T, bool), p: &(T, T, bool)| q.0 <= p.0 && q.1 <= p.1 && (!q.2 || p.2);
    let mut kept: Vec<(T, T, bool)> = Vec::new();
    for s in states {
        if kept.iter().any(|k| dominates(k, &s)) {
            continue;
        }
        kept.retain(|k| !dominates(&s, k));
        kept.push(s);
    }
    kept
}
