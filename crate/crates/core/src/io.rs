//! JSON instance and clustering files, and DIMACS CNF input.
//!
//! An instance file looks like
//!
//! ```json
//! {"arcs":[[0,1]],"nodes":[{"delay":0,"id":0,"weight":1},{"delay":0,"id":1,"label":"t","weight":1}],
//!  "params":{"D":2,"capacity":2,"d":1,"include_node_delays":true},"schema_version":1}
//! ```
//!
//! Keys are emitted in sorted order on a single line, so emitting the same
//! instance always gives the same bytes. Node ids need not be `0..n`; other
//! ids are mapped to dense ones in ascending order, with a warning. A
//! clustering file is `{"clusters":[[0,1],[2]],"schema_version":1}`, using
//! the instance's ids.

use std::collections::BTreeMap;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::{Clustering, ClusteringError, DelayParams};
use crate::dag::{DagError, NodeAttrs, NodeId, Weight};
use crate::reductions::{Cnf, Literal};
use crate::{Dag, Delay, Instance};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("{context}: {message}")]
    Parse { context: String, message: String },
    #[error("unsupported schema_version {found} (this build reads version {SCHEMA_VERSION})")]
    SchemaVersionUnsupported { found: u64 },
    #[error(transparent)]
    Dag(#[from] DagError),
    #[error(transparent)]
    Clustering(#[from] ClusteringError),
}

fn parse_error(context: impl Into<String>, message: impl ToString) -> IoError {
    IoError::Parse {
        context: context.into(),
        message: message.to_string(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    arcs: Vec<[u64; 2]>,
    nodes: Vec<NodeRecord>,
    params: ParamsRecord,
    schema_version: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRecord {
    delay: Delay,
    id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    weight: Weight,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsRecord {
    #[serde(rename = "D")]
    inter: Delay,
    capacity: Weight,
    #[serde(rename = "d")]
    intra: Delay,
    include_node_delays: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusteringFile {
    clusters: Vec<Vec<u64>>,
    schema_version: u64,
}

#[derive(Deserialize)]
struct VersionProbe {
    schema_version: Option<u64>,
}

fn check_version(text: &str, what: &str) -> Result<(), IoError> {
    // A malformed document is reported by the full parse, with position.
    if let Ok(VersionProbe { schema_version }) = serde_json::from_str::<VersionProbe>(text) {
        match schema_version {
            Some(v) if v == u64::from(SCHEMA_VERSION) => {}
            Some(found) => return Err(IoError::SchemaVersionUnsupported { found }),
            None => return Err(parse_error(what, "missing field `schema_version`")),
        }
    }
    Ok(())
}

/// File ids of an instance's nodes, indexed by dense [`NodeId`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdMap {
    original: Vec<u64>,
    dense: BTreeMap<u64, NodeId>,
}

impl IdMap {
    pub fn identity(n: usize) -> Self {
        Self::from_sorted((0..n as u64).collect())
    }

    fn from_sorted(original: Vec<u64>) -> Self {
        let dense = original.iter().enumerate().map(|(i, &id)| (id, NodeId(i))).collect();
        IdMap { original, dense }
    }

    pub fn node_of(&self, id: u64) -> Option<NodeId> {
        self.dense.get(&id).copied()
    }

    pub fn id_of(&self, v: NodeId) -> u64 {
        self.original[v.0]
    }

    pub fn is_identity(&self) -> bool {
        self.original.iter().enumerate().all(|(i, &id)| id == i as u64)
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    parse_instance_with_ids(text).map(|(instance, _)| instance)
}

/// Parses and validates an instance file, also returning how file ids map to
/// node ids.
pub fn parse_instance_with_ids(text: &str) -> Result<(Instance, IdMap), IoError> {
    check_version(text, "instance")?;
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| parse_error("instance", e))?;

    let mut ids: Vec<u64> = file.nodes.iter().map(|n| n.id).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(parse_error("nodes", format!("duplicate node id {}", w[0])));
    }
    let map = IdMap::from_sorted(ids);
    let in_file_order = file.nodes.iter().enumerate().all(|(i, n)| n.id == i as u64);
    if !in_file_order {
        warn!(
            "node ids are not 0..{} in order; renumbering them by ascending id",
            file.nodes.len()
        );
    }

    let mut records: Vec<NodeRecord> = file.nodes;
    records.sort_by_key(|n| n.id);
    let nodes = records
        .into_iter()
        .map(|n| NodeAttrs {
            weight: n.weight,
            delay: n.delay,
            label: n.label,
        })
        .collect();
    let mut arcs = Vec::with_capacity(file.arcs.len());
    for (i, &[tail, head]) in file.arcs.iter().enumerate() {
        let lookup = |id: u64| {
            map.node_of(id)
                .ok_or_else(|| parse_error(format!("arcs[{i}]"), format!("arc [{tail}, {head}] refers to unknown node id {id}")))
        };
        arcs.push((lookup(tail)?.0, lookup(head)?.0));
    }
    let dag = Dag::new(nodes, arcs)?;
    let p = file.params;
    let params = DelayParams::new(p.intra, p.inter, p.capacity)?.with_node_delays(p.include_node_delays);
    Ok((Instance::new(dag, params)?, map))
}

/// One-line JSON with dense ids, newline-terminated.
pub fn emit_instance(instance: &Instance) -> String {
    let dag = &instance.dag;
    let file = InstanceFile {
        arcs: dag.arcs().iter().map(|a| [a.tail.0 as u64, a.head.0 as u64]).collect(),
        nodes: dag
            .nodes()
            .map(|v| NodeRecord {
                delay: *dag.delay(v),
                id: v.0 as u64,
                label: dag.label(v).map(str::to_string),
                weight: dag.weight(v),
            })
            .collect(),
        params: ParamsRecord {
            inter: instance.params.inter,
            capacity: instance.params.capacity,
            intra: instance.params.intra,
            include_node_delays: instance.params.include_node_delays,
        },
        schema_version: u64::from(SCHEMA_VERSION),
    };
    let mut out = serde_json::to_string(&file).expect("plain data serializes");
    out.push('\n');
    out
}

/// Parses a clustering file whose ids are those of the instance described by
/// `ids`. Every node must appear in exactly one cluster.
pub fn parse_clustering(text: &str, ids: &IdMap) -> Result<Clustering, IoError> {
    check_version(text, "clustering")?;
    let file: ClusteringFile = serde_json::from_str(text).map_err(|e| parse_error("clustering", e))?;
    let mut blocks = Vec::with_capacity(file.clusters.len());
    for (c, cluster) in file.clusters.iter().enumerate() {
        let block = cluster
            .iter()
            .map(|&id| {
                ids.node_of(id)
                    .ok_or_else(|| ClusteringError::NodeSetMismatch(format!("clusters[{c}] names unknown node id {id}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        blocks.push(block);
    }
    Ok(Clustering::from_blocks(ids.len(), &blocks)?)
}

/// One-line JSON with dense ids, newline-terminated.
pub fn emit_clustering(clustering: &Clustering) -> String {
    emit_clustering_with_ids(clustering, &IdMap::identity(clustering.node_count()))
}

pub fn emit_clustering_with_ids(clustering: &Clustering, ids: &IdMap) -> String {
    let file = ClusteringFile {
        clusters: clustering
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&v| ids.id_of(v)).collect())
            .collect(),
        schema_version: u64::from(SCHEMA_VERSION),
    };
    let mut out = serde_json::to_string(&file).expect("plain data serializes");
    out.push('\n');
    out
}

/// Reads DIMACS CNF: optional `c` comment lines, a `p cnf <vars> <clauses>`
/// header, then whitespace-separated literals with each clause ended by `0`.
/// A `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<Cnf, IoError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let lineno = index + 1;
        let context = || format!("dimacs line {lineno}");
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(parse_error(context(), "second `p` header"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse::<usize>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| parse_error(context(), format!("expected `p cnf <vars> <clauses>`, got `{line}`")))?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(parse_error(context(), "clause before the `p cnf` header"));
        };
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| parse_error(context(), format!("`{token}` is not an integer literal")))?;
            match Literal::from_dimacs(value) {
                None => clauses.push(std::mem::take(&mut current)),
                Some(lit) if lit.var < num_vars => current.push(lit),
                Some(_) => {
                    return Err(parse_error(
                        context(),
                        format!("literal {value} exceeds the {num_vars} declared variables"),
                    ));
                }
            }
        }
    }
    let Some((num_vars, num_clauses)) = header else {
        return Err(parse_error("dimacs", "missing `p cnf` header"));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != num_clauses {
        return Err(parse_error(
            "dimacs",
            format!("header declares {num_clauses} clauses, found {}", clauses.len()),
        ));
    }
    Ok(Cnf::new(num_vars, clauses))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"arcs":[[0,1]],"nodes":[{"delay":0,"id":0,"weight":1},{"delay":0,"id":1,"weight":1}],"params":{"D":2,"capacity":2,"d":1,"include_node_delays":true},"schema_version":1}"#;

    #[test]
    fn minimal_instance() {
        let inst = parse_instance(MINIMAL).unwrap();
        assert_eq!(inst.dag.node_count(), 2);
        assert_eq!(inst.dag.arc_count(), 1);
        assert_eq!(emit_instance(&inst), format!("{MINIMAL}\n"));
    }

    #[test]
    fn unknown_arc_endpoint() {
        let text = MINIMAL.replace("[[0,1]]", "[[0,1],[1,7]]");
        let err = parse_instance(&text).unwrap_err();
        assert!(matches!(&err, IoError::Parse { context, .. } if context == "arcs[1]"), "{err}");
        assert!(err.to_string().contains("[1, 7]"));
    }

    #[test]
    fn version_and_syntax_errors() {
        let text = MINIMAL.replace("\"schema_version\":1", "\"schema_version\":2");
        assert_eq!(parse_instance(&text).unwrap_err(), IoError::SchemaVersionUnsupported { found: 2 });
        let err = parse_instance("{\"arcs\": [\n[0,1],\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let text = MINIMAL.replace(",\"schema_version\":1", "");
        assert!(matches!(parse_instance(&text), Err(IoError::Parse { .. })));
    }

    #[test]
    fn cycle_is_propagated() {
        let text = MINIMAL.replace("[[0,1]]", "[[0,1],[1,0]]");
        assert!(matches!(parse_instance(&text), Err(IoError::Dag(DagError::CycleDetected { .. }))));
    }

    #[test]
    fn sparse_ids_are_renumbered() {
        let text = r#"{"arcs":[[30,10]],"nodes":[{"delay":0,"id":30,"label":"u","weight":1},{"delay":0,"id":10,"label":"v","weight":1}],"params":{"D":2,"capacity":2,"d":1,"include_node_delays":false},"schema_version":1}"#;
        let (inst, ids) = parse_instance_with_ids(text).unwrap();
        assert_eq!(inst.dag.label(NodeId(0)), Some("v"));
        assert!(inst.dag.arc_between(NodeId(1), NodeId(0)).is_some());
        assert!(!inst.params.include_node_delays);
        assert!(!ids.is_identity());
        let c = parse_clustering(r#"{"clusters":[[30],[10]],"schema_version":1}"#, &ids).unwrap();
        assert!(!c.same_cluster(NodeId(0), NodeId(1)));
        assert_eq!(
            emit_clustering_with_ids(&c, &ids),
            "{\"clusters\":[[10],[30]],\"schema_version\":1}\n"
        );
    }

    #[test]
    fn clustering_round_trip_and_errors() {
        let ids = IdMap::identity(3);
        let c = parse_clustering(r#"{"clusters":[[2,0],[1]],"schema_version":1}"#, &ids).unwrap();
        assert_eq!(emit_clustering(&c), "{\"clusters\":[[0,2],[1]],\"schema_version\":1}\n");
        assert_eq!(parse_clustering(&emit_clustering(&c), &ids).unwrap(), c);
        assert!(matches!(
            parse_clustering(r#"{"clusters":[[0,1]],"schema_version":1}"#, &ids),
            Err(IoError::Clustering(ClusteringError::NodeSetMismatch(_)))
        ));
        assert!(matches!(
            parse_clustering(r#"{"clusters":[[0,1],[2,5]],"schema_version":1}"#, &ids),
            Err(IoError::Clustering(ClusteringError::NodeSetMismatch(_)))
        ));
        let empty = Clustering::singletons(0);
        assert_eq!(emit_clustering(&empty), "{\"clusters\":[],\"schema_version\":1}\n");
    }

    #[test]
    fn dimacs() {
        let cnf = parse_dimacs("c example\np cnf 3 2\n1 2 3 0\n-1 2\n -3 0\n").unwrap();
        assert_eq!(cnf.num_vars, 3);
        assert_eq!(
            cnf.clauses,
            vec![
                vec![Literal::pos(0), Literal::pos(1), Literal::pos(2)],
                vec![Literal::neg(0), Literal::pos(1), Literal::neg(2)]
            ]
        );
        assert!(matches!(parse_dimacs("1 2 3 0\n"), Err(IoError::Parse { .. })));
        assert!(matches!(parse_dimacs(""), Err(IoError::Parse { .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 3 0\n"), Err(IoError::Parse { .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 x 0\n"), Err(IoError::Parse { .. })));
        assert!(matches!(parse_dimacs("p cnf 2 2\n1 2 0\n"), Err(IoError::Parse { .. })));
        assert_eq!(parse_dimacs("p cnf 1 1\n1 0\n%\n0\n").unwrap().clauses.len(), 1);
    }
}
