//! Seeded random instances for property tests and reports.
//!
//! All generators draw from `ChaCha8Rng::seed_from_u64(seed)`, so a seed
//! produces the same instance on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clustering::{DelayParams, Instance};
use crate::dag::Dag;
use crate::scalar::DelayScalar;

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random DAG with `n` unit nodes and up to `max_arcs` arcs.
///
/// A hidden random order makes every arc point forward in it, which keeps the
/// graph acyclic without biasing arcs towards low node ids.
pub fn random_unit_dag<T: DelayScalar>(rng: &mut impl Rng, n: usize, max_arcs: usize) -> Dag<T> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            candidates.push((order[i], order[j]));
        }
    }
    candidates.shuffle(rng);
    let limit = max_arcs.min(candidates.len());
    let arc_count = if limit == 0 { 0 } else { rng.random_range(0..=limit) };
    candidates.truncate(arc_count);
    candidates.sort_unstable();
    Dag::unit(n, candidates).expect("forward arcs in a fixed order are acyclic")
}

/// Random tree on `n` unit nodes (each node attaches to a uniformly chosen
/// earlier node under a random relabelling) with independently random arc
/// orientations.
pub fn random_unit_tree<T: DelayScalar>(rng: &mut impl Rng, n: usize) -> Dag<T> {
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut arcs = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let j = rng.random_range(0..i);
        let (a, b) = (label[i], label[j]);
        arcs.push(if rng.random_bool(0.5) { (a, b) } else { (b, a) });
    }
    arcs.sort_unstable();
    Dag::unit(n, arcs).expect("orienting a tree cannot create a cycle")
}

/// Unit-weight, capacity-2, zero-node-delay instance around a random DAG.
pub fn random_pairing_instance<T: DelayScalar>(seed: u64, max_nodes: usize, max_arcs: usize, intra: T, inter: T) -> Instance<T> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(1..=max_nodes.max(1));
    let dag = random_unit_dag(&mut rng, n, max_arcs);
    Instance::new(dag, DelayParams::new(intra, inter, 2).expect("caller passes d <= D")).expect("valid params")
}

/// Unit-weight, capacity-2 instance around a random oriented tree with
/// `min_nodes..=max_nodes` nodes.
pub fn random_tree_instance<T: DelayScalar>(seed: u64, min_nodes: usize, max_nodes: usize, intra: T, inter: T) -> Instance<T> {
    let mut rng = rng_for(seed);
    let n = rng.random_range(min_nodes.max(1)..=max_nodes.max(min_nodes).max(1));
    let dag = random_unit_tree(&mut rng, n);
    Instance::new(dag, DelayParams::new(intra, inter, 2).expect("caller passes d <= D")).expect("valid params")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let a: Instance<u64> = random_pairing_instance(7, 10, 15, 1, 2);
        let b: Instance<u64> = random_pairing_instance(7, 10, 15, 1, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn bounds_hold() {
        for seed in 0..200 {
            let inst: Instance<u64> = random_pairing_instance(seed, 10, 15, 1, 2);
            assert!((1..=10).contains(&inst.dag.node_count()));
            assert!(inst.dag.arc_count() <= 15);
            let tree: Instance<u64> = random_tree_instance(seed, 4, 12, 1, 2);
            assert!(tree.dag.underlying_simple_graph().is_tree());
            assert!((4..=12).contains(&tree.dag.node_count()));
        }
    }
}
