use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn dagclust(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dagclust"))
        .args(args)
        .env_remove("DAGCLUST_CAPS")
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("bad JSON line {l:?}: {e}")))
        .collect()
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn brute_force_on_three_arc_chain() {
    let out = dagclust(&["solve", "--alg", "brute", path_str(&data("chain3.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["delay"], 4);
    assert_eq!(lines[0]["clusters"], serde_json::json!([[0, 1], [2, 3]]));
}

#[test]
fn approx_adversarial_on_three_arc_chain() {
    let out = dagclust(&[
        "solve",
        "--alg",
        "approx2",
        "--tiebreak",
        "adversarial",
        path_str(&data("chain3.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let line = &json_lines(&out)[0];
    assert_eq!(line["delay"], 5);
    assert_eq!(line["tiebreak"], "adversarial");
}

#[test]
fn tree_solver_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let clust = dir.path().join("c.json");
    let out = dagclust(&["solve", "--alg", "tree", path_str(&data("chain3.json")), "-o", path_str(&clust)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["delay"], 4);
    let out = dagclust(&["eval", path_str(&data("chain3.json")), path_str(&clust)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["delay"], 4);
}

#[test]
fn tree_solver_rejects_non_trees() {
    let out = dagclust(&["solve", "--alg", "tree", path_str(&data("fig2.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_fig2() {
    let out = dagclust(&["eval", path_str(&data("fig2.json")), path_str(&data("fig2_sigma.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let line = &json_lines(&out)[0];
    assert_eq!(line["delay"], 9);
    assert_eq!(line["feasible"], true);
    assert_eq!(line["clusters"], 3);
}

#[test]
fn eval_mismatched_nodes_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let clust = dir.path().join("c.json");
    std::fs::write(&clust, "{\"clusters\":[[0,1],[2]],\"schema_version\":1}\n").unwrap();
    let out = dagclust(&["eval", path_str(&data("chain3.json")), path_str(&clust)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn eval_over_capacity_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let clust = dir.path().join("c.json");
    std::fs::write(&clust, "{\"clusters\":[[0,1,2],[3]],\"schema_version\":1}\n").unwrap();
    let out = dagclust(&["eval", path_str(&data("chain3.json")), path_str(&clust)]);
    assert_eq!(out.status.code(), Some(1));
    let line = &json_lines(&out)[0];
    assert_eq!(line["feasible"], false);
    assert_eq!(line["violations"][0]["weight"], 3);
}

#[test]
fn bridge_lemma() {
    let out = dagclust(&["verify", "bridge-lemma", "--d", "1", "--D", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let line = &json_lines(&out)[0];
    assert_eq!(line["pass"], true);
    assert_eq!(line["max_delay"], 16);
    let out = dagclust(&["verify", "bridge-lemma", "--d", "2", "--D", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn structure_lemma_small() {
    let out = dagclust(&["verify", "structure-lemma", "--nodes", "6", "--seeds", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    let summary = lines.last().unwrap();
    assert_eq!(summary["pass"], true);
    assert_eq!(summary["instances"], 20);
}

#[test]
fn ratio_report_is_deterministic() {
    let args = ["report", "ratio", "--nodes", "7", "--seeds", "30", "--seed", "5"];
    let a = dagclust(&args);
    let b = dagclust(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let summary = json_lines(&a).pop().unwrap();
    assert_eq!(summary["report"], "ratio");
    assert_eq!(summary["instances"], 30);
}

#[test]
fn gen_partition_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("p.json");
    let out = dagclust(&["gen", "partition", "--set", "3,1,2", "-o", path_str(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let line = &json_lines(&out)[0];
    assert_eq!(line["nodes"], 5);
    assert_eq!(line["total"], 6);
    let out = dagclust(&["solve", "--alg", "brute", path_str(&f)]);
    assert_eq!(json_lines(&out)[0]["delay"], 1);

    let out = dagclust(&["gen", "partition", "--set", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_cnf_and_bridge_to_stdout() {
    let out = dagclust(&["gen", "cnf", path_str(&data("two_clauses.cnf"))]);
    assert_eq!(out.status.code(), Some(0));
    let inst = &json_lines(&out)[0];
    assert_eq!(inst["nodes"].as_array().unwrap().len(), 76);
    assert_eq!(inst["arcs"].as_array().unwrap().len(), 92);

    let out = dagclust(&["gen", "bridge", "--d", "1", "--D", "3"]);
    let inst = &json_lines(&out)[0];
    assert_eq!(inst["nodes"].as_array().unwrap().len(), 10);
    assert_eq!(inst["params"]["D"], 3);
}

#[test]
fn solve_output_is_byte_identical() {
    let chain = data("chain3.json");
    for alg in ["approx2", "tree", "brute"] {
        let args = ["solve", "--alg", alg, path_str(&chain)];
        let (a, b) = (dagclust(&args), dagclust(&args));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
    // fig2 has node delays, which approx2 does not accept
    let fig2 = data("fig2.json");
    assert_eq!(dagclust(&["solve", "--alg", "approx2", path_str(&fig2)]).status.code(), Some(2));
}

#[test]
fn caps_env_limits_brute_force() {
    let out = Command::new(env!("CARGO_BIN_EXE_dagclust"))
        .args(["solve", "--alg", "brute", path_str(&data("fig2.json"))])
        .env("DAGCLUST_CAPS", "nodes=4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DAGCLUST_CAPS"));
}

#[test]
fn usage_errors() {
    assert_eq!(dagclust(&["solve", "--alg", "nope", "x.json"]).status.code(), Some(2));
    assert_eq!(dagclust(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dagclust(&["solve", "--alg", "brute", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn human_output() {
    let out = dagclust(&["--human", "solve", "--alg", "brute", path_str(&data("chain3.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("delay"));
    assert!(text.contains("{0,1} {2,3}"));
    assert!(serde_json::from_str::<Value>(text.lines().next().unwrap()).is_err());
}
