use std::fmt;
use std::ops::Range;

use crate::clustering::{
    matching_to_clustering_unchecked, network_delay_unchecked, Clustering, DelayParams, DelayReport, Instance, Matching,
};
use crate::dag::{ArcId, Dag, NodeAttrs, NodeId};
use crate::scalar::DelayScalar;
use crate::solvers::for_each_maximal_matching;

use super::bridge::BRIDGE_ARCS;
use super::ReductionError;

/// A variable (0-based) or its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    /// Reads a non-zero DIMACS literal: `3` is `x3`, `-3` is `¬x3`.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        if lit == 0 {
            return None;
        }
        let var = usize::try_from(lit.unsigned_abs()).ok()? - 1;
        Some(Literal { var, negated: lit < 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn is_true_under(self, assignment: &Assignment) -> bool {
        assignment.get(self.var) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var + 1)
        } else {
            write!(f, "x{}", self.var + 1)
        }
    }
}

/// A formula in conjunctive normal form over variables `0..num_vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Literal>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Self {
        Cnf { num_vars, clauses }
    }

    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.is_true_under(assignment)))
    }
}

/// Truth values for variables `0..len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// Variable `i` gets bit `i` of `bits`.
    pub fn from_bits(num_vars: usize, bits: u64) -> Self {
        Assignment {
            values: (0..num_vars).map(|i| i < 64 && bits >> i & 1 == 1).collect(),
        }
    }

    pub fn get(&self, var: usize) -> bool {
        self.values[var]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// How a clustering treats one literal's 4-cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleState {
    /// `{1,2}` and `{4,3}` are clusters: the variable is true.
    Horizontal,
    /// `{3,2}` and `{4, vertical partner}` are clusters: the variable is false.
    Vertical,
    Mixed,
}

/// The gadget of one literal occurrence.
///
/// `nodes[k - 1]` is node `k` of the drawing: the 4-cycle `1→2, 3→2, 4→3,
/// 4→1` with the 2-path `6→5→1` (positive) or `6→5→3` (negated). When the
/// variable has several occurrences, the arc out of node 4 goes to node 1 of
/// the next occurrence instead, and that node is `vertical_partner`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralCycle {
    pub clause: usize,
    pub position: usize,
    pub literal: Literal,
    pub nodes: [NodeId; 6],
    pub vertical_partner: NodeId,
}

impl LiteralCycle {
    pub fn node(&self, k: usize) -> NodeId {
        self.nodes[k - 1]
    }

    pub fn horizontal_pairs(&self) -> [(NodeId, NodeId); 2] {
        [(self.node(1), self.node(2)), (self.node(4), self.node(3))]
    }

    pub fn vertical_pairs(&self) -> [(NodeId, NodeId); 2] {
        [(self.node(3), self.node(2)), (self.node(4), self.vertical_partner)]
    }

    /// Pairs encoding the given value of the variable.
    pub fn pairs_for(&self, value: bool) -> [(NodeId, NodeId); 2] {
        if value {
            self.horizontal_pairs()
        } else {
            self.vertical_pairs()
        }
    }

    pub fn state(&self, clustering: &Clustering) -> CycleState {
        let together = |pairs: [(NodeId, NodeId); 2]| pairs.iter().all(|&(u, v)| clustering.same_cluster(u, v));
        match (together(self.horizontal_pairs()), together(self.vertical_pairs())) {
            (true, false) => CycleState::Horizontal,
            (false, true) => CycleState::Vertical,
            _ => CycleState::Mixed,
        }
    }
}

/// Bookkeeping for a generated 3-SAT instance.
#[derive(Clone, Debug, PartialEq)]
pub struct CnfMeta<T> {
    pub num_vars: usize,
    /// Node ids of clause `c`'s gadget.
    pub clause_nodes: Vec<Range<usize>>,
    /// One entry per literal occurrence, in clause order.
    pub cycles: Vec<LiteralCycle>,
    /// Per variable, the arcs joining its occurrences cyclically (empty for
    /// variables occurring at most once).
    pub joins: Vec<Vec<ArcId>>,
    /// `8d + 13D`.
    pub satisfied_clause_delay: T,
}

const CLAUSE_NODES: usize = 38;
const LITERAL_BASE: [usize; 3] = [0, 16, 32];
const CONNECTOR_BASE: [usize; 2] = [6, 22];
const BRIDGE_NAMES: [&str; 9] = ["a", "b", "c", "e", "k", "f", "g", "h", "i"];

/// The 6-node gadget of a single literal of variable 0.
pub fn gen_var_gadget<T: DelayScalar>(negated: bool, intra: T, inter: T) -> Result<(Instance<T>, LiteralCycle), ReductionError> {
    let mut b = Builder::default();
    let cycle = b.literal(0, 0, Literal { var: 0, negated }, format!("{}", Literal { var: 0, negated }));
    let instance = b.finish(intra, inter)?;
    Ok((instance, cycle))
}

/// The 38-node gadget of one clause: three literal gadgets chained by two
/// bridges. No joins are added, even if a variable repeats.
pub fn gen_clause_gadget<T: DelayScalar>(lits: &[Literal], intra: T, inter: T) -> Result<(Instance<T>, CnfMeta<T>), ReductionError> {
    let num_vars = lits.iter().map(|l| l.var + 1).max().unwrap_or(0);
    build(&Cnf::new(num_vars, vec![lits.to_vec()]), intra, inter, false)
}

/// One clause gadget per clause, with the occurrences of each variable joined
/// cyclically: the arc `4→1` of occurrence `i` is redirected to node 1 of
/// occurrence `i + 1`, the last one closing back to the first.
pub fn gen_cnf_instance<T: DelayScalar>(cnf: &Cnf, intra: T, inter: T) -> Result<(Instance<T>, CnfMeta<T>), ReductionError> {
    build(cnf, intra, inter, true)
}

fn build<T: DelayScalar>(cnf: &Cnf, intra: T, inter: T, join: bool) -> Result<(Instance<T>, CnfMeta<T>), ReductionError> {
    for (clause, lits) in cnf.clauses.iter().enumerate() {
        if lits.len() != 3 {
            return Err(ReductionError::NotThreeCnf { clause, len: lits.len() });
        }
        if let Some(l) = lits.iter().find(|l| l.var >= cnf.num_vars) {
            return Err(ReductionError::UnknownVariable {
                clause,
                var: l.var,
                num_vars: cnf.num_vars,
            });
        }
    }

    let mut b = Builder::default();
    let mut cycles = Vec::with_capacity(3 * cnf.clauses.len());
    let mut clause_nodes = Vec::with_capacity(cnf.clauses.len());
    for (c, lits) in cnf.clauses.iter().enumerate() {
        let start = b.nodes.len();
        let tag = format!("c{}", c + 1);
        let mut clause_cycles: Vec<LiteralCycle> = Vec::with_capacity(3);
        for (p, &lit) in lits.iter().enumerate() {
            debug_assert_eq!(b.nodes.len(), start + LITERAL_BASE[p]);
            clause_cycles.push(b.literal(c, p, lit, format!("{tag}.{lit}")));
            if p < 2 {
                debug_assert_eq!(b.nodes.len(), start + CONNECTOR_BASE[p]);
                b.connector_nodes(&format!("{tag}.b{}", p + 1));
            }
        }
        for p in 0..2 {
            b.connector_arcs(start + CONNECTOR_BASE[p], clause_cycles[p].node(2), clause_cycles[p + 1].node(6));
        }
        debug_assert_eq!(b.nodes.len() - start, CLAUSE_NODES);
        clause_nodes.push(start..b.nodes.len());
        cycles.extend(clause_cycles);
    }

    let mut joins = vec![Vec::new(); cnf.num_vars];
    if join {
        for (var, var_joins) in joins.iter_mut().enumerate() {
            let occ: Vec<usize> = (0..cycles.len()).filter(|&i| cycles[i].literal.var == var).collect();
            if occ.len() < 2 {
                continue;
            }
            for (k, &i) in occ.iter().enumerate() {
                let next = occ[(k + 1) % occ.len()];
                let target = cycles[next].node(1);
                let arc = b.cycle_arc[i];
                b.arcs[arc].1 = target.0;
                cycles[i].vertical_partner = target;
                var_joins.push(ArcId(arc));
            }
        }
    }

    let instance = b.finish(intra, inter)?;
    debug_assert_eq!(instance.dag.node_count(), CLAUSE_NODES * cnf.clauses.len());
    debug_assert!(instance.dag.underlying_simple_graph().max_degree() <= 3);
    let meta = CnfMeta {
        num_vars: cnf.num_vars,
        clause_nodes,
        cycles,
        joins,
        satisfied_clause_delay: intra.times(8) + inter.times(13),
    };
    Ok((instance, meta))
}

#[derive(Default)]
struct Builder {
    nodes: Vec<String>,
    arcs: Vec<(usize, usize)>,
    /// Index in `arcs` of each literal's `4→1` arc.
    cycle_arc: Vec<usize>,
}

impl Builder {
    fn node(&mut self, label: String) -> usize {
        self.nodes.push(label);
        self.nodes.len() - 1
    }

    fn literal(&mut self, clause: usize, position: usize, literal: Literal, tag: String) -> LiteralCycle {
        let ids: Vec<usize> = (1..=6).map(|k| self.node(format!("{tag}.{k}"))).collect();
        let n = |k: usize| ids[k - 1];
        self.arcs.extend([(n(1), n(2)), (n(3), n(2)), (n(4), n(3))]);
        self.cycle_arc.push(self.arcs.len());
        self.arcs.push((n(4), n(1)));
        let attach = if literal.negated { n(3) } else { n(1) };
        self.arcs.extend([(n(5), attach), (n(6), n(5))]);
        LiteralCycle {
            clause,
            position,
            literal,
            nodes: std::array::from_fn(|k| NodeId(ids[k])),
            vertical_partner: NodeId(n(1)),
        }
    }

    /// `k1` followed by bridge nodes `a..i`; the bridge's `j` is node 6 of
    /// the next literal.
    fn connector_nodes(&mut self, tag: &str) {
        self.node(format!("{tag}.k1"));
        for name in BRIDGE_NAMES {
            self.node(format!("{tag}.{name}"));
        }
    }

    fn connector_arcs(&mut self, base: usize, from: NodeId, into: NodeId) {
        let k1 = base;
        let bridge = |i: usize| if i == 9 { into.0 } else { base + 1 + i };
        self.arcs.push((from.0, k1));
        self.arcs.push((k1, bridge(0)));
        for (t, h) in BRIDGE_ARCS {
            self.arcs.push((bridge(t), bridge(h)));
        }
    }

    fn finish<T: DelayScalar>(self, intra: T, inter: T) -> Result<Instance<T>, ReductionError> {
        let nodes = self
            .nodes
            .into_iter()
            .map(|label| NodeAttrs {
                weight: 1,
                delay: T::zero(),
                label: Some(label),
            })
            .collect();
        let dag = Dag::new(nodes, self.arcs).map_err(ReductionError::ConstructionCycle)?;
        Ok(Instance::new(dag, DelayParams::new(intra, inter, 2)?)?)
    }
}

/// Reads the variable values off the 4-cycles: horizontal means true,
/// vertical false, for both polarities. `None` if some cycle is neither or two
/// occurrences of a variable disagree. Variables without occurrences are false.
pub fn decode_assignment<T>(meta: &CnfMeta<T>, clustering: &Clustering) -> Option<Assignment> {
    let mut values: Vec<Option<bool>> = vec![None; meta.num_vars];
    for cycle in &meta.cycles {
        let value = match cycle.state(clustering) {
            CycleState::Horizontal => true,
            CycleState::Vertical => false,
            CycleState::Mixed => return None,
        };
        let slot = &mut values[cycle.literal.var];
        if slot.is_some_and(|v| v != value) {
            return None;
        }
        *slot = Some(value);
    }
    Some(Assignment::new(values.into_iter().map(|v| v.unwrap_or(false)).collect()))
}

/// The best clustering among maximal matchings that contain the 4-cycle
/// pairs encoding `assignment`; the remaining pairs are searched exhaustively.
pub fn best_clustering_for_assignment<T: DelayScalar>(
    instance: &Instance<T>,
    meta: &CnfMeta<T>,
    assignment: &Assignment,
    matching_cap: u64,
) -> Result<(Clustering, DelayReport<T>), ReductionError> {
    if assignment.len() != meta.num_vars {
        return Err(ReductionError::AssignmentSize {
            got: assignment.len(),
            expected: meta.num_vars,
        });
    }
    let mut fixed = Matching::new();
    for cycle in &meta.cycles {
        for (u, v) in cycle.pairs_for(assignment.get(cycle.literal.var)) {
            fixed.insert_unchecked(u, v);
        }
    }
    let n = instance.dag.node_count();
    let graph = instance.dag.underlying_simple_graph();
    let mut best: Option<(Clustering, DelayReport<T>)> = None;
    for_each_maximal_matching(&graph, &fixed, matching_cap, |m| {
        let clustering = matching_to_clustering_unchecked(n, m);
        let report = network_delay_unchecked(instance, &clustering);
        if best.as_ref().is_none_or(|(_, b)| report.delay < b.delay) {
            best = Some((clustering, report));
        }
    })?;
    Ok(best.expect("the fixed pairs extend to at least one maximal matching"))
}
