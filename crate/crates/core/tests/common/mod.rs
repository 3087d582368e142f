//! Independent oracles shared by the integration tests. None of them call the
//! crate's delay evaluation, path enumeration or matching code.

#![allow(dead_code)]

use std::io::Write;
use std::time::Duration;

use dagclust::clustering::Instance;
use dagclust::dag::Dag;
use dagclust::{Clustering, DelayScalar, NodeId};

/// Every source-to-sink path as a node sequence, or `None` past `cap` paths.
pub fn all_paths<T>(dag: &Dag<T>, cap: usize) -> Option<Vec<Vec<usize>>> {
    let n = dag.node_count();
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for a in dag.arcs() {
        succ[a.tail.0].push(a.head.0);
        indeg[a.head.0] += 1;
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn walk(v: usize, succ: &[Vec<usize>], stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, cap: usize) -> bool {
        stack.push(v);
        if succ[v].is_empty() {
            out.push(stack.clone());
        }
        for &w in &succ[v] {
            if out.len() > cap || !walk(w, succ, stack, out, cap) {
                return false;
            }
        }
        stack.pop();
        out.len() <= cap
    }
    for s in (0..n).filter(|&v| indeg[v] == 0) {
        if !walk(s, &succ, &mut stack, &mut out, cap) {
            return None;
        }
    }
    Some(out)
}

/// Delay of one path under the model, summed term by term.
pub fn path_cost<T: DelayScalar>(instance: &Instance<T>, clustering: &Clustering, path: &[usize]) -> T {
    let p = &instance.params;
    let mut total = T::zero();
    for (i, &v) in path.iter().enumerate() {
        if p.include_node_delays {
            total = total + *instance.dag.delay(NodeId(v));
        }
        if i > 0 {
            let same = clustering.cluster_of(NodeId(path[i - 1])) == clustering.cluster_of(NodeId(v));
            total = total + if same { p.intra } else { p.inter };
        }
    }
    total
}

/// Maximum path delay by enumerating every source-to-sink path.
pub fn oracle_delay<T: DelayScalar>(instance: &Instance<T>, clustering: &Clustering, cap: usize) -> Option<T> {
    let paths = all_paths(&instance.dag, cap)?;
    let mut best = T::zero();
    for p in &paths {
        let c = path_cost(instance, clustering, p);
        if c > best {
            best = c;
        }
    }
    Some(best)
}

/// Longest path length in arcs, by enumeration.
pub fn oracle_longest_len<T>(dag: &Dag<T>) -> usize {
    all_paths(dag, usize::MAX).unwrap().iter().map(|p| p.len() - 1).max().unwrap_or(0)
}

/// Undirected edges `(low, high)` of the DAG, deduplicated.
pub fn edges<T>(dag: &Dag<T>) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = dag
        .arcs()
        .iter()
        .map(|a| (a.tail.0.min(a.head.0), a.tail.0.max(a.head.0)))
        .collect();
    e.sort_unstable();
    e.dedup();
    e
}

/// All maximal matchings, by checking every edge subset. Only for small graphs.
pub fn oracle_maximal_matchings(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    assert!(edges.len() <= 24, "subset oracle is exponential");
    let mut out = Vec::new();
    for mask in 0u32..(1 << edges.len()) {
        let chosen: Vec<(usize, usize)> = (0..edges.len()).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
        let mut used = vec![false; n];
        let mut ok = true;
        for &(u, v) in &chosen {
            if used[u] || used[v] {
                ok = false;
                break;
            }
            used[u] = true;
            used[v] = true;
        }
        if ok && edges.iter().all(|&(u, v)| used[u] || used[v]) {
            out.push(chosen);
        }
    }
    out
}

/// Clustering with the given pairs as clusters and everything else alone.
pub fn pairs_to_clustering(n: usize, pairs: &[(usize, usize)]) -> Clustering {
    let mut labels: Vec<usize> = (0..n).collect();
    for &(u, v) in pairs {
        labels[v] = labels[u];
    }
    Clustering::from_labels(&labels)
}

/// Whether the multiset splits into two halves of equal sum.
pub fn balanced(set: &[u64]) -> bool {
    let total: u64 = set.iter().sum();
    total.is_multiple_of(2)
        && (0u32..(1 << set.len())).any(|m| (0..set.len()).filter(|&i| m >> i & 1 == 1).map(|i| set[i]).sum::<u64>() * 2 == total)
}

/// Prints one verdict line straight to stdout, past the test harness capture.
pub fn verdict(id: &str, pass: bool, summary: &str, elapsed: Duration) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let line = format!("[{tag}] {id}: {summary} ({:.2}s)\n", elapsed.as_secs_f64());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}
