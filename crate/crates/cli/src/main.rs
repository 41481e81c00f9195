//! `stc-lab`: spanning tree congestion and the 3-Partition reduction from the
//! command line. Every run prints one JSON report on stdout; diagnostics go
//! to stderr.
//!
//! Exit codes: 0 pass, 1 a checked property failed, 2 usage or I/O error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use report::Inputs;

const DEFAULT_SEED: u64 = 20_240_229;

#[derive(Parser)]
#[command(name = "stc-lab", version, about = "Spanning tree congestion and the 3-Partition reduction")]
struct Cli {
    /// Leave wall-clock timing out of the report so output is byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the reduction graph for an instance and write graph and labels.
    Gen(GenArgs),
    /// Audit a generated graph against the construction and classify it.
    Audit(AuditArgs),
    /// Build the witness tree for a partition of the sorted instance.
    Witness(WitnessArgs),
    /// Recover a partition from a spanning tree of congestion at most k.
    Extract(ExtractArgs),
    /// Congestion of every edge of a spanning tree.
    EvalTree(EvalTreeArgs),
    /// Exact spanning tree congestion.
    Solve(SolveArgs),
    /// Whether some spanning tree has congestion at most k.
    Decide(DecideArgs),
    /// Check a proper interval ordering.
    CheckPio(CheckPioArgs),
    /// Solve a 3-Partition instance by brute force.
    #[command(name = "3part")]
    ThreePart(ThreePartArgs),
    /// Full pipeline on one instance.
    Roundtrip(RoundtripArgs),
}

#[derive(Args, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    /// Require the instance to be sorted with a_1 >= 8m already.
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Args, Serialize)]
pub struct AuditArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    /// Without it the values are read back from the X-Y adjacency.
    #[arg(long)]
    pub instance: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct WitnessArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    /// Partition JSON over 0-based positions of the sorted instance.
    #[arg(long)]
    pub partition: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub instance: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct ExtractArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long)]
    pub tree: PathBuf,
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Also write the partition JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct EvalTreeArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub tree: PathBuf,
}

#[derive(Args, Serialize)]
pub struct SolveArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Largest spanning-tree count the search will accept.
    #[arg(long, env = "STC_LAB_BUDGET")]
    pub budget: Option<u64>,
    /// Write the witness tree here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct DecideArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(short = 'k')]
    pub k: u64,
    #[arg(long, env = "STC_LAB_BUDGET")]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct CheckPioArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub order: PathBuf,
}

#[derive(Args, Serialize)]
pub struct ThreePartArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Write the solution over sorted positions here (the form `witness` reads).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct RoundtripArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Random star-family assignments to check.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut inputs = Inputs::default();
    let (name, flags, result) = match &cli.command {
        Command::Gen(a) => ("gen", to_flags(a), commands::gen(a, &mut inputs)),
        Command::Audit(a) => ("audit", to_flags(a), commands::audit(a, &mut inputs)),
        Command::Witness(a) => ("witness", to_flags(a), commands::witness(a, &mut inputs)),
        Command::Extract(a) => ("extract", to_flags(a), commands::extract(a, &mut inputs)),
        Command::EvalTree(a) => ("eval-tree", to_flags(a), commands::eval_tree(a, &mut inputs)),
        Command::Solve(a) => ("solve", to_flags(a), commands::solve(a, &mut inputs)),
        Command::Decide(a) => ("decide", to_flags(a), commands::decide(a, &mut inputs)),
        Command::CheckPio(a) => ("check-pio", to_flags(a), commands::check_pio(a, &mut inputs)),
        Command::ThreePart(a) => ("3part", to_flags(a), commands::three_part(a, &mut inputs)),
        Command::Roundtrip(a) => ("roundtrip", to_flags(a), commands::roundtrip(a, &mut inputs)),
    };
    let timing = (!cli.no_timing).then_some(started);
    match result {
        Ok(outcome) => {
            println!("{}", report::render(name, &flags, &inputs, outcome.passed, &outcome.payload, timing));
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("stc-lab {name}: check failed");
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let payload = serde_json::json!({ "error": format!("{err:#}") });
            println!("{}", report::render(name, &flags, &inputs, false, &payload, timing));
            eprintln!("stc-lab {name}: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn to_flags<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("flags serialize")
}
