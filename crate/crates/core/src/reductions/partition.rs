use crate::clustering::{network_delay, Clustering, DelayParams, Instance};
use crate::dag::{Dag, NodeAttrs, NodeId, Weight};
use crate::scalar::DelayScalar;

use super::ReductionError;

/// Where the pieces of a PARTITION instance ended up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionMeta {
    /// Node of element `i`, labelled `a_{i+1}`.
    pub element_nodes: Vec<NodeId>,
    pub source: NodeId,
    pub sink: NodeId,
    /// Sum of all elements; source and sink weigh half of it each.
    pub total: Weight,
}

/// Builds `s → a_i → t` for every element, with `w(s) = w(t) = B/2`,
/// `w(a_i) = S_i`, capacity `B`, `d = 0`, `D = inter` and zero node delays.
///
/// Delay `D` is reachable iff the elements split into two halves of equal sum.
pub fn gen_partition_instance<T: DelayScalar>(set: &[Weight], inter: T) -> Result<(Instance<T>, PartitionMeta), ReductionError> {
    if set.is_empty() {
        return Err(ReductionError::EmptySet);
    }
    if let Some(index) = set.iter().position(|&x| x == 0) {
        return Err(ReductionError::NonPositive { index });
    }
    let total = set
        .iter()
        .try_fold(0u64, |acc, &x| acc.checked_add(x))
        .ok_or(ReductionError::TotalOverflow)?;
    if total % 2 == 1 {
        return Err(ReductionError::OddTotal { total });
    }
    let n = set.len();
    let node = |weight: Weight, label: String| NodeAttrs {
        weight,
        delay: T::zero(),
        label: Some(label),
    };
    let mut nodes = Vec::with_capacity(n + 2);
    nodes.push(node(total / 2, "s".into()));
    for (i, &x) in set.iter().enumerate() {
        nodes.push(node(x, format!("a_{}", i + 1)));
    }
    nodes.push(node(total / 2, "t".into()));
    let sink = n + 1;
    let arcs = (1..=n).flat_map(|i| [(0, i), (i, sink)]);
    let dag = Dag::new(nodes, arcs).map_err(ReductionError::ConstructionCycle)?;
    let params = DelayParams::new(T::zero(), inter, total)?;
    let instance = Instance::new(dag, params)?;
    let meta = PartitionMeta {
        element_nodes: (1..=n).map(NodeId).collect(),
        source: NodeId(0),
        sink: NodeId(sink),
        total,
    };
    Ok((instance, meta))
}

/// The element indices sharing a cluster with the source, provided the
/// clustering reaches delay `D` and those elements sum to `B/2`.
pub fn decode_partition<T: DelayScalar>(
    instance: &Instance<T>,
    meta: &PartitionMeta,
    clustering: &Clustering,
) -> Result<Option<Vec<usize>>, ReductionError> {
    let report = network_delay(instance, clustering)?;
    if report.delay > instance.params.inter {
        return Ok(None);
    }
    let chosen: Vec<usize> = (0..meta.element_nodes.len())
        .filter(|&i| clustering.same_cluster(meta.element_nodes[i], meta.source))
        .collect();
    let sum: Weight = chosen.iter().map(|&i| instance.dag.weight(meta.element_nodes[i])).sum();
    Ok((sum * 2 == meta.total).then_some(chosen))
}
