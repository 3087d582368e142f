//! `dagclust`: generate, solve, evaluate and verify DAG clustering instances.
//!
//! Every result is printed as one JSON object per line unless `--human` is
//! given. Exit status is 0 on success, 1 when a clustering is infeasible or a
//! verification fails, and 2 on usage, input or precondition errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "dagclust", version, about = "Delay-minimal clustering of DAGs without replication")]
struct Cli {
    /// Print human-readable tables instead of JSON lines.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a reduction instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Cluster an instance.
    Solve(SolveArgs),
    /// Evaluate a clustering of an instance.
    Eval(EvalArgs),
    /// Check a structural statement exhaustively.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Statistics over seeded random instances.
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Weighted instance from a PARTITION multiset (d = 0).
    Partition {
        /// Comma-separated positive integers with an even sum.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        /// Inter-cluster delay.
        #[arg(long = "D", default_value_t = 1)]
        inter: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Unit-weight instance from a DIMACS 3-CNF file.
    Cnf {
        input: PathBuf,
        #[command(flatten)]
        delays: Delays,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The 10-node bridge DAG.
    Bridge {
        #[command(flatten)]
        delays: Delays,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct Delays {
    /// Intra-cluster delay.
    #[arg(long = "d", default_value_t = 1)]
    intra: u64,
    /// Inter-cluster delay.
    #[arg(long = "D", default_value_t = 2)]
    inter: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Approx2,
    Tree,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieBreak {
    Lex,
    Adversarial,
}

impl From<TieBreak> for dagclust::solvers::TieBreakPolicy {
    fn from(t: TieBreak) -> Self {
        match t {
            TieBreak::Lex => Self::Lexicographic,
            TieBreak::Adversarial => Self::AdversarialCenterFirst,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    alg: Algorithm,
    /// Which middle arc approx2 takes on even-length paths.
    #[arg(long, value_enum, default_value = "lex")]
    tiebreak: TieBreak,
    instance: PathBuf,
    /// Write the clustering file here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    instance: PathBuf,
    clustering: PathBuf,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Every maximal matching of the bridge DAG has worst path exactly d + 3D.
    BridgeLemma {
        #[arg(long = "d")]
        intra: u64,
        #[arg(long = "D")]
        inter: u64,
    },
    /// On random unit DAGs the best maximal-matching clustering is optimal.
    StructureLemma {
        #[command(flatten)]
        random: RandomArgs,
    },
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Largest observed ALG/OPT of approx2 against brute force.
    Ratio {
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long, value_enum, default_value = "lex")]
        tiebreak: TieBreak,
    },
}

#[derive(Args, Clone, Copy)]
struct RandomArgs {
    /// Maximum node count per instance.
    #[arg(long, default_value_t = 8)]
    nodes: usize,
    /// Maximum arc count per instance.
    #[arg(long, default_value_t = 15)]
    arcs: usize,
    /// Number of instances; instance i uses seed `seed + i`.
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    delays: Delays,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut out = output::Output::new(cli.human);
    match commands::run(cli.command, &mut out) {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Failed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
