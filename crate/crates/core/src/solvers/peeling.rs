//! Pendant-peeling recursion for DAGs whose underlying simple graph is a tree
//! (unit weights, capacity 2, zero node delays).
//!
//! This recursion is not always optimal: dropping a same-side twin leaf
//! forgets that the twin's paths are no shorter than the kept leaf's, so the
//! recursive solution may pair `x` with the kept leaf while the re-added twin
//! pays `D` on the same arc. On `3→1, 4→1, 1→2, 0→2` with `d = 1, D = 2` it
//! returns delay 4 where 3 is optimal. [`tree_exact`](super::tree_exact) is
//! the exact algorithm; this one is kept for comparison.
//!
//! The recursion peels a vertex `x` that is pendant in the tree with its
//! leaves removed, so all of `x`'s neighbours except at most one are leaves:
//!
//! * `deg(x) >= 4`: two leaves of `x` have the same orientation; drop one,
//!   solve the rest, and add it back as a singleton.
//! * `deg(x) == 3`: the same if its two leaves agree in orientation.
//!   Otherwise drop both leaves, solve, then pair `x` with the leaf on the
//!   opposite side of its remaining arc (the source leaf when that arc leaves
//!   `x`, the sink leaf when it enters), releasing `x` from its old cluster.
//! * `deg(x) == 2`: if `x` is a source or sink drop its leaf and re-add it
//!   as a singleton; otherwise drop `x` and its leaf and re-add them as a pair.
//!
//! Trees with at most three nodes are solved exhaustively.

use crate::clustering::{matching_to_clustering_unchecked, network_delay_unchecked, Clustering, DelayReport, Instance, Matching};
use crate::dag::{NodeId, SimpleGraph};
use crate::scalar::DelayScalar;

use super::{for_each_maximal_matching, require_unit_pairing, SolverError};

pub fn tree_peeling<T: DelayScalar>(instance: &Instance<T>) -> Result<(Clustering, DelayReport<T>), SolverError> {
    require_unit_pairing(instance)?;
    let graph = instance.dag.underlying_simple_graph();
    if !graph.is_tree() {
        return Err(SolverError::NotATree);
    }
    let solver = TreeSolver { instance, graph: &graph };
    let mut alive = vec![true; instance.dag.node_count()];
    let matching = solver.solve(&mut alive);
    let clustering = matching_to_clustering_unchecked(instance.dag.node_count(), &matching);
    let report = network_delay_unchecked(instance, &clustering);
    Ok((clustering, report))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LeafSide {
    /// The leaf's arc points into `x`.
    Source,
    /// The leaf's arc points out of `x`.
    Sink,
}

struct TreeSolver<'a, T> {
    instance: &'a Instance<T>,
    graph: &'a SimpleGraph,
}

impl<T: DelayScalar> TreeSolver<'_, T> {
    fn live_neighbors(&self, alive: &[bool], v: NodeId) -> Vec<NodeId> {
        self.graph.neighbors(v).iter().copied().filter(|u| alive[u.0]).collect()
    }

    fn side(&self, x: NodeId, leaf: NodeId) -> LeafSide {
        if self.instance.dag.arc_between(leaf, x).is_some() {
            LeafSide::Source
        } else {
            LeafSide::Sink
        }
    }

    /// Solves the subtree on `alive` nodes; `alive` is restored on return.
    fn solve(&self, alive: &mut [bool]) -> Matching {
        let live: Vec<NodeId> = (0..alive.len()).filter(|&v| alive[v]).map(NodeId).collect();
        if live.len() <= 3 {
            return self.exhaustive(alive);
        }
        let degree = |v: NodeId| self.graph.neighbors(v).iter().filter(|u| alive[u.0]).count();
        let is_leaf = |v: NodeId| degree(v) == 1;

        let x = live
            .iter()
            .copied()
            .filter(|&v| !is_leaf(v))
            .find(|&v| self.live_neighbors(alive, v).iter().filter(|&&u| !is_leaf(u)).count() <= 1)
            .expect("a tree with four or more nodes has an inner vertex pendant among inner vertices");
        let neighbours = self.live_neighbors(alive, x);
        let leaves: Vec<NodeId> = neighbours.iter().copied().filter(|&u| is_leaf(u)).collect();
        let inner: Option<NodeId> = neighbours.iter().copied().find(|&u| !is_leaf(u));

        match neighbours.len() {
            2 => {
                let y = leaves[0];
                let dag = &self.instance.dag;
                let has_in = neighbours.iter().any(|&u| dag.arc_between(u, x).is_some());
                let has_out = neighbours.iter().any(|&u| dag.arc_between(x, u).is_some());
                if !(has_in && has_out) {
                    self.solve_without(alive, &[y])
                } else {
                    let mut m = self.solve_without(alive, &[x, y]);
                    m.insert_unchecked(x, y);
                    m
                }
            }
            deg => {
                debug_assert!(deg >= 3);
                if let Some(twin) = self.same_side_leaf(x, &leaves) {
                    return self.solve_without(alive, &[twin]);
                }
                // deg == 3 with one source leaf, one sink leaf and an inner neighbour.
                let p = inner.expect("three leaves always contain a same-side pair");
                let (y1, y2) = match self.side(x, leaves[0]) {
                    LeafSide::Source => (leaves[0], leaves[1]),
                    LeafSide::Sink => (leaves[1], leaves[0]),
                };
                let partner = if self.instance.dag.arc_between(x, p).is_some() { y1 } else { y2 };
                let mut m = self.solve_without(alive, &[y1, y2]);
                if m.contains(x, p) {
                    m.remove_unchecked(x, p);
                }
                m.insert_unchecked(x, partner);
                m
            }
        }
    }

    /// The highest-id leaf of `x` that shares its side with another leaf.
    fn same_side_leaf(&self, x: NodeId, leaves: &[NodeId]) -> Option<NodeId> {
        for side in [LeafSide::Source, LeafSide::Sink] {
            let group: Vec<NodeId> = leaves.iter().copied().filter(|&y| self.side(x, y) == side).collect();
            if group.len() >= 2 {
                return group.last().copied();
            }
        }
        None
    }

    fn solve_without(&self, alive: &mut [bool], removed: &[NodeId]) -> Matching {
        for v in removed {
            alive[v.0] = false;
        }
        let m = self.solve(alive);
        for v in removed {
            alive[v.0] = true;
        }
        m
    }

    fn exhaustive(&self, alive: &[bool]) -> Matching {
        let (sub, originals) = self.instance.dag.induced(alive);
        let sub_instance = Instance {
            dag: sub,
            params: self.instance.params,
        };
        let sub_graph = sub_instance.dag.underlying_simple_graph();
        let mut best: Option<(T, Matching)> = None;
        for_each_maximal_matching(&sub_graph, &Matching::new(), u64::MAX, |m| {
            let c = matching_to_clustering_unchecked(sub_instance.dag.node_count(), m);
            let delay = network_delay_unchecked(&sub_instance, &c).delay;
            if best.as_ref().is_none_or(|(b, _)| delay < *b) {
                best = Some((delay, m.clone()));
            }
        })
        .expect("uncapped");
        let (_, m) = best.expect("at least one maximal matching");
        let mut out = Matching::new();
        for (u, v) in m.pairs() {
            out.insert_unchecked(originals[u.0], originals[v.0]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::DelayParams;
    use crate::dag::Dag;

    fn inst(n: usize, arcs: &[(usize, usize)], intra: u64, inter: u64) -> Instance<u64> {
        Instance::new(
            Dag::unit(n, arcs.iter().copied()).unwrap(),
            DelayParams::new(intra, inter, 2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn two_arc_chain() {
        // brute force over the pairings {u,v} and {v,w}: both give d + D
        let (_, r) = tree_peeling(&inst(3, &[(0, 1), (1, 2)], 1, 2)).unwrap();
        assert_eq!(r.delay, 3);
    }

    #[test]
    fn single_arc() {
        let (_, r) = tree_peeling(&inst(2, &[(0, 1)], 1, 2)).unwrap();
        assert_eq!(r.delay, 1);
    }

    #[test]
    fn out_star() {
        // centre paired with one leaf: one path costs d, the others D
        let (c, r) = tree_peeling(&inst(4, &[(0, 1), (0, 2), (0, 3)], 1, 2)).unwrap();
        assert_eq!(r.delay, 2);
        assert_eq!(c.cluster_count(), 3);
    }

    #[test]
    fn longer_chain() {
        let (_, r) = tree_peeling(&inst(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)], 1, 2)).unwrap();
        // 5 arcs: best alternates d D d D d
        assert_eq!(r.delay, 3 + 4);
    }

    #[test]
    fn twin_source_leaves_are_not_handled_optimally() {
        let instance = inst(5, &[(0, 2), (1, 2), (3, 1), (4, 1)], 1, 2);
        let (_, r) = tree_peeling(&instance).unwrap();
        assert_eq!(r.delay, 4);
        let (_, opt) = crate::solvers::brute_force_opt(&instance, 12).unwrap();
        assert_eq!(opt.delay, 3);
    }

    #[test]
    fn rejects_non_trees() {
        assert_eq!(
            tree_peeling(&inst(3, &[(0, 1), (1, 2), (0, 2)], 1, 2)).unwrap_err(),
            SolverError::NotATree
        );
        assert_eq!(tree_peeling(&inst(4, &[(0, 1), (2, 3)], 1, 2)).unwrap_err(), SolverError::NotATree);
    }
}
