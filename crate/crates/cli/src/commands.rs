use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use dagclust::clustering::{network_delay, validate, DelayParams};
use dagclust::io::{self, IdMap};
use dagclust::random::random_pairing_instance;
use dagclust::reductions::{gen_bridge, gen_cnf_instance, gen_partition_instance, verify_bridge_lemma};
use dagclust::solvers::{approx2, brute_force_matching_opt, brute_force_opt, tree_exact, SolverError};
use dagclust::{Caps, Clustering, Delay, DelayReport, Instance, Path as DagPath};

use crate::output::Output;
use crate::{Algorithm, Command, Delays, EvalArgs, GenCommand, RandomArgs, ReportCommand, SolveArgs, TieBreak, VerifyCommand};

pub enum Outcome {
    Success,
    Failed,
}

pub fn run(command: Command, out: &mut Output) -> Result<Outcome> {
    match command {
        Command::Gen(g) => generate(g, out),
        Command::Solve(args) => solve(args, out),
        Command::Eval(args) => eval(args, out),
        Command::Verify(VerifyCommand::BridgeLemma { intra, inter }) => bridge_lemma(intra, inter, out),
        Command::Verify(VerifyCommand::StructureLemma { random }) => structure_lemma(random, out),
        Command::Report(ReportCommand::Ratio { random, tiebreak }) => ratio(random, tiebreak, out),
    }
}

fn caps() -> Result<Caps> {
    Caps::from_env().context("reading DAGCLUST_CAPS")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_instance(path: &Path) -> Result<(Instance, IdMap)> {
    io::parse_instance_with_ids(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn path_ids(path: &DagPath, ids: &IdMap) -> Vec<u64> {
    path.nodes().iter().map(|&v| ids.id_of(v)).collect()
}

fn cluster_ids(clustering: &Clustering, ids: &IdMap) -> Vec<Vec<u64>> {
    clustering
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&v| ids.id_of(v)).collect())
        .collect()
}

fn arrow_path(nodes: &[u64]) -> String {
    nodes.iter().map(u64::to_string).collect::<Vec<_>>().join(" -> ")
}

fn brace_clusters(clusters: &[Vec<u64>]) -> String {
    clusters
        .iter()
        .map(|c| format!("{{{}}}", c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn generate(command: GenCommand, out: &mut Output) -> Result<Outcome> {
    let (kind, instance, extra, output) = match command {
        GenCommand::Partition { set, inter, output } => {
            let (instance, meta) = gen_partition_instance(&set, inter)?;
            ("partition", instance, vec![("total", json!(meta.total))], output)
        }
        GenCommand::Cnf { input, delays, output } => {
            let cnf = io::parse_dimacs(&read(&input)?).with_context(|| format!("parsing {}", input.display()))?;
            let (instance, meta) = gen_cnf_instance(&cnf, delays.intra, delays.inter)?;
            let extra = vec![
                ("clauses", json!(cnf.clauses.len())),
                ("threshold", json!(meta.satisfied_clause_delay)),
            ];
            ("cnf", instance, extra, output)
        }
        GenCommand::Bridge { delays, output } => ("bridge", gen_bridge(delays.intra, delays.inter)?, Vec::new(), output),
    };
    let text = io::emit_instance(&instance);
    let Some(path) = output else {
        out.raw(&text);
        return Ok(Outcome::Success);
    };
    write(&path, &text)?;
    let mut value = json!({
        "arcs": instance.dag.arc_count(),
        "kind": kind,
        "nodes": instance.dag.node_count(),
        "output": path.display().to_string(),
    });
    let mut table = vec![
        ("kind", kind.to_string()),
        ("nodes", instance.dag.node_count().to_string()),
        ("arcs", instance.dag.arc_count().to_string()),
    ];
    for (key, v) in extra {
        table.push((key, v.to_string()));
        value[key] = v;
    }
    table.push(("output", path.display().to_string()));
    out.record(value, &table);
    Ok(Outcome::Success)
}

fn solve(args: SolveArgs, out: &mut Output) -> Result<Outcome> {
    let (instance, ids) = load_instance(&args.instance)?;
    let caps = caps()?;
    let result = match args.alg {
        Algorithm::Approx2 => approx2(&instance, args.tiebreak.into()).map(|(c, _)| c),
        Algorithm::Tree => tree_exact(&instance).map(|(c, _)| c),
        Algorithm::Brute => brute_force_opt(&instance, caps.brute_force_nodes).map(|(c, _)| c),
    };
    let clustering = match result {
        Ok(c) => c,
        Err(err @ SolverError::NoFeasibleClustering { .. }) => {
            eprintln!("error: {err}");
            return Ok(Outcome::Failed);
        }
        Err(err @ (SolverError::TooLarge { .. } | SolverError::MatchingExplosion { .. })) => {
            bail!("{err} (raise the limit with DAGCLUST_CAPS)")
        }
        Err(err) => return Err(err.into()),
    };
    let report = network_delay(&instance, &clustering)?;
    let feasible = validate(&instance, &clustering)?.is_feasible();
    if let Some(path) = &args.output {
        write(path, &io::emit_clustering_with_ids(&clustering, &ids))?;
    }
    let alg = match args.alg {
        Algorithm::Approx2 => "approx2",
        Algorithm::Tree => "tree",
        Algorithm::Brute => "brute",
    };
    let clusters = cluster_ids(&clustering, &ids);
    let critical = path_ids(&report.critical_path, &ids);
    let mut value = json!({
        "alg": alg,
        "clusters": clusters,
        "critical_path": critical,
        "delay": report.delay,
        "feasible": feasible,
    });
    let mut table = vec![("alg", alg.to_string())];
    if let Algorithm::Approx2 = args.alg {
        let t = match args.tiebreak {
            TieBreak::Lex => "lex",
            TieBreak::Adversarial => "adversarial",
        };
        value["tiebreak"] = json!(t);
        table.push(("tiebreak", t.to_string()));
    }
    table.extend([
        ("delay", report.delay.to_string()),
        ("critical path", arrow_path(&critical)),
        ("clusters", brace_clusters(&clusters)),
        ("feasible", feasible.to_string()),
    ]);
    out.record(value, &table);
    Ok(if feasible { Outcome::Success } else { Outcome::Failed })
}

fn eval(args: EvalArgs, out: &mut Output) -> Result<Outcome> {
    let (instance, ids) = load_instance(&args.instance)?;
    let clustering =
        io::parse_clustering(&read(&args.clustering)?, &ids).with_context(|| format!("parsing {}", args.clustering.display()))?;
    let feasibility = validate(&instance, &clustering)?;
    let report: DelayReport = network_delay(&instance, &clustering)?;
    let critical = path_ids(&report.critical_path, &ids);
    let violations: Vec<Value> = feasibility
        .violations
        .iter()
        .map(|v| json!({ "cluster": v.cluster, "weight": v.weight }))
        .collect();
    let feasible = feasibility.is_feasible();
    let value = json!({
        "capacity": feasibility.capacity,
        "clusters": clustering.cluster_count(),
        "critical_path": critical,
        "delay": report.delay,
        "feasible": feasible,
        "violations": violations,
    });
    let mut table = vec![
        ("delay", report.delay.to_string()),
        ("critical path", arrow_path(&critical)),
        ("clusters", clustering.cluster_count().to_string()),
        ("feasible", feasible.to_string()),
    ];
    for v in &feasibility.violations {
        table.push((
            "over capacity",
            format!("cluster {} weighs {} > {}", v.cluster, v.weight, feasibility.capacity),
        ));
    }
    out.record(value, &table);
    Ok(if feasible { Outcome::Success } else { Outcome::Failed })
}

fn bridge_lemma(intra: Delay, inter: Delay, out: &mut Output) -> Result<Outcome> {
    let report = verify_bridge_lemma(intra, inter)?;
    let counterexample: Option<Vec<[usize; 2]>> = report.counterexample.as_ref().map(|m| m.pairs().map(|(u, v)| [u.0, v.0]).collect());
    let value = json!({
        "D": inter,
        "check": "bridge-lemma",
        "counterexample": counterexample,
        "d": intra,
        "expected": report.expected,
        "matchings": report.matchings_checked,
        "max_delay": report.max_delay,
        "min_delay": report.min_delay,
        "pass": report.holds(),
    });
    let table = [
        ("check", "bridge-lemma".to_string()),
        ("d, D", format!("{intra}, {inter}")),
        ("matchings", report.matchings_checked.to_string()),
        ("delay range", format!("{}..={}", report.min_delay, report.max_delay)),
        ("expected", report.expected.to_string()),
        ("pass", report.holds().to_string()),
    ];
    out.record(value, &table);
    Ok(if report.holds() { Outcome::Success } else { Outcome::Failed })
}

fn check_delays(delays: Delays) -> Result<()> {
    DelayParams::new(delays.intra, delays.inter, 2)?;
    Ok(())
}

fn structure_lemma(random: RandomArgs, out: &mut Output) -> Result<Outcome> {
    check_delays(random.delays)?;
    let caps = caps()?;
    let mut mismatches = 0u64;
    for seed in random.seed..random.seed + random.seeds {
        let instance = random_pairing_instance(seed, random.nodes, random.arcs, random.delays.intra, random.delays.inter);
        let (_, opt) = brute_force_opt(&instance, caps.brute_force_nodes)?;
        let (_, best_matching) = brute_force_matching_opt(&instance, caps.matchings)?;
        if opt.delay != best_matching.delay {
            mismatches += 1;
            out.record(
                json!({ "matching_opt": best_matching.delay, "opt": opt.delay, "seed": seed }),
                &[
                    ("seed", seed.to_string()),
                    ("opt", opt.delay.to_string()),
                    ("matching opt", best_matching.delay.to_string()),
                ],
            );
        }
    }
    let pass = mismatches == 0;
    out.record(
        json!({ "check": "structure-lemma", "instances": random.seeds, "mismatches": mismatches, "pass": pass }),
        &[
            ("check", "structure-lemma".to_string()),
            ("instances", random.seeds.to_string()),
            ("mismatches", mismatches.to_string()),
            ("pass", pass.to_string()),
        ],
    );
    Ok(if pass { Outcome::Success } else { Outcome::Failed })
}

fn ratio(random: RandomArgs, tiebreak: TieBreak, out: &mut Output) -> Result<Outcome> {
    check_delays(random.delays)?;
    let caps = caps()?;
    // (alg, opt, seed) of the largest ratio seen; ratios compare by cross-multiplication
    let mut worst: Option<(Delay, Delay, u64)> = None;
    let mut above_two = 0u64;
    let mut unbounded = 0u64;
    for seed in random.seed..random.seed + random.seeds {
        let instance = random_pairing_instance(seed, random.nodes, random.arcs, random.delays.intra, random.delays.inter);
        let (_, opt) = brute_force_opt(&instance, caps.brute_force_nodes)?;
        let (clustering, _) = approx2(&instance, tiebreak.into())?;
        let alg = network_delay(&instance, &clustering)?.delay;
        let opt = opt.delay;
        if opt == 0 {
            if alg > 0 {
                unbounded += 1;
            }
            continue;
        }
        if u128::from(alg) > 2 * u128::from(opt) {
            above_two += 1;
            out.record(
                json!({ "alg": alg, "opt": opt, "ratio": alg as f64 / opt as f64, "seed": seed }),
                &[("seed", seed.to_string()), ("alg", alg.to_string()), ("opt", opt.to_string())],
            );
        }
        let larger = worst.is_none_or(|(a, o, _)| u128::from(alg) * u128::from(o) > u128::from(a) * u128::from(opt));
        if larger {
            worst = Some((alg, opt, seed));
        }
    }
    let max_ratio = worst.map(|(a, o, _)| a as f64 / o as f64);
    let value = json!({
        "above_two": above_two,
        "instances": random.seeds,
        "max_ratio": max_ratio,
        "report": "ratio",
        "unbounded": unbounded,
        "worst": worst.map(|(a, o, s)| json!({ "alg": a, "opt": o, "seed": s })),
    });
    let table = [
        ("report", "ratio".to_string()),
        ("instances", random.seeds.to_string()),
        ("max ALG/OPT", max_ratio.map_or("-".to_string(), |r| format!("{r:.4}"))),
        ("worst", worst.map_or("-".to_string(), |(a, o, s)| format!("seed {s}: {a}/{o}"))),
        ("above 2", above_two.to_string()),
        ("OPT = 0 < ALG", unbounded.to_string()),
    ];
    out.record(value, &table);
    Ok(Outcome::Success)
}
