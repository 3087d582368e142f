//! Enumeration of maximal matchings.
//!
//! The search walks vertices in id order. At the lowest unmatched vertex it
//! either matches it to each free neighbour in turn or leaves it unmatched;
//! the latter is only allowed while no neighbour has been left unmatched,
//! which is exactly what keeps every produced matching maximal. Each
//! sequence of choices gives a different matching, so nothing repeats.

use crate::clustering::Matching;
use crate::dag::{NodeId, SimpleGraph};

use super::SolverError;

/// Every maximal matching of `graph`, in search order.
pub fn enumerate_maximal_matchings(graph: &SimpleGraph, cap: u64) -> Result<Vec<Matching>, SolverError> {
    let mut out = Vec::new();
    for_each_maximal_matching(graph, &Matching::new(), cap, |m| out.push(m.clone()))?;
    Ok(out)
}

/// Calls `visit` for every maximal matching of `graph` that contains `fixed`.
///
/// `fixed` must be a matching of `graph`. Returns how many matchings were
/// visited, or [`SolverError::MatchingExplosion`] once more than `cap` are found.
pub fn for_each_maximal_matching(
    graph: &SimpleGraph,
    fixed: &Matching,
    cap: u64,
    mut visit: impl FnMut(&Matching),
) -> Result<u64, SolverError> {
    let n = graph.node_count();
    let mut search = Search {
        graph,
        partner: vec![None; n],
        skipped: vec![false; n],
        current: fixed.clone(),
        count: 0,
        cap,
    };
    for (u, v) in fixed.pairs() {
        search.partner[u.0] = Some(v);
        search.partner[v.0] = Some(u);
    }
    search.descend(0, &mut visit)?;
    Ok(search.count)
}

struct Search<'g> {
    graph: &'g SimpleGraph,
    partner: Vec<Option<NodeId>>,
    skipped: Vec<bool>,
    current: Matching,
    count: u64,
    cap: u64,
}

impl Search<'_> {
    fn descend(&mut self, from: usize, visit: &mut impl FnMut(&Matching)) -> Result<(), SolverError> {
        let n = self.graph.node_count();
        let Some(v) = (from..n).find(|&v| self.partner[v].is_none()) else {
            self.count += 1;
            if self.count > self.cap {
                return Err(SolverError::MatchingExplosion { cap: self.cap });
            }
            debug_assert!(self.current.is_maximal_in(self.graph));
            visit(&self.current);
            return Ok(());
        };
        let vid = NodeId(v);

        for &u in self.graph.neighbors(vid) {
            if self.partner[u.0].is_some() || self.skipped[u.0] {
                continue;
            }
            self.partner[v] = Some(u);
            self.partner[u.0] = Some(vid);
            self.current.insert_unchecked(vid, u);
            let result = self.descend(v + 1, visit);
            self.current.remove_unchecked(vid, u);
            self.partner[v] = None;
            self.partner[u.0] = None;
            result?;
        }

        // Leaving v unmatched forces every neighbour to be matched, so no
        // neighbour may already have been left unmatched.
        let can_skip = self.graph.neighbors(vid).iter().all(|u| !self.skipped[u.0]);
        if can_skip {
            self.skipped[v] = true;
            let result = self.descend(v + 1, visit);
            self.skipped[v] = false;
            result?;
        }
        Ok(())
    }
}
