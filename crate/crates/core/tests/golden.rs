use dagclust::clustering::network_delay;
use dagclust::io::{emit_clustering_with_ids, emit_instance, parse_clustering, parse_dimacs, parse_instance_with_ids};
use dagclust::reductions::Literal;

const FIG2: &str = include_str!("data/fig2.json");
const FIG2_SIGMA: &str = include_str!("data/fig2_sigma.json");

#[test]
fn six_node_example_has_delay_nine() {
    let (inst, ids) = parse_instance_with_ids(FIG2).unwrap();
    assert_eq!((inst.dag.node_count(), inst.dag.arc_count()), (6, 8));
    let c = parse_clustering(FIG2_SIGMA, &ids).unwrap();
    assert_eq!(c.cluster_count(), 3);
    assert_eq!(network_delay(&inst, &c).unwrap().delay, 9);
}

#[test]
fn six_node_example_emits_canonically() {
    let (inst, ids) = parse_instance_with_ids(FIG2).unwrap();
    let text = emit_instance(&inst);
    assert!(text.ends_with('\n') && text.lines().count() == 1);
    let c = parse_clustering(FIG2_SIGMA, &ids).unwrap();
    assert_eq!(
        emit_clustering_with_ids(&c, &ids),
        "{\"clusters\":[[0,1],[2,4],[3,5]],\"schema_version\":1}\n"
    );
}

#[test]
fn dimacs_files() {
    let one = parse_dimacs(include_str!("data/clause.cnf")).unwrap();
    assert_eq!(one.clauses, vec![vec![Literal::pos(0), Literal::neg(1), Literal::pos(2)]]);
    let two = parse_dimacs(include_str!("data/two_clauses.cnf")).unwrap();
    assert_eq!((two.num_vars, two.clauses.len()), (4, 2));
}
