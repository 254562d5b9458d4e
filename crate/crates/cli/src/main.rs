//! `negpath` command line. Exit codes: 0 solved, 1 negative cycle,
//! 2 verification failure, 3 input error.

mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use negpath::cover::Preset;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CYCLE: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

/// Negative-weight single-source shortest paths via clustered path covers.
///
/// Vertices in `.gr` files and in plain-text output are 1-indexed. JSON
/// artifacts index vertices and edges from 0, edges in `.gr` arc order.
#[derive(Parser, Debug)]
#[command(name = "negpath", version)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Distances from a source, or a negative cycle reachable from it.
    Solve(SolveArgs),
    /// Build a d-path cover of a nonnegative graph.
    Pathcover(CoverArgs),
    /// Check an artifact against a graph.
    Verify(VerifyArgs),
    /// Write a generated instance as `.gr`.
    Gen(GenArgs),
    /// Time engines over a corpus; prints JSON rows.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Scaling,
    Bf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Paper,
    Practical,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Preset {
        match p {
            PresetArg::Paper => Preset::Paper,
            PresetArg::Practical => Preset::Practical,
        }
    }
}

/// Solver knobs shared by `solve` and `bench`.
#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value = "practical")]
    pub preset: PresetArg,
    /// Override the diameter slack.
    #[arg(long)]
    pub lambda: Option<u64>,
    /// Override the base-case threshold on negative edges.
    #[arg(long)]
    pub k0: Option<u64>,
    /// Always build covers above the base threshold.
    #[arg(long)]
    pub no_probe: bool,
    /// Validate every recursive instance while solving.
    #[arg(long)]
    pub check_invariants: bool,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Graph in `.gr` format; `-` reads stdin.
    pub input: PathBuf,
    /// Source vertex, 1-indexed.
    #[arg(long, default_value_t = 1)]
    pub source: usize,
    #[arg(long, value_enum, default_value = "scaling")]
    pub engine: Engine,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Certify distances before printing them.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    pub input: PathBuf,
    /// Path weight bound.
    #[arg(long)]
    pub d: i64,
    /// Slack; defaults to 16 (practical) or the smallest value the paper preset accepts.
    #[arg(long)]
    pub lambda: Option<u64>,
    #[arg(long, value_enum, default_value = "practical")]
    pub preset: PresetArg,
    /// Replace negative weights by 0 instead of rejecting the input.
    #[arg(long)]
    pub truncate: bool,
    /// Check the homomorphism, clustering and, within budget, covering.
    #[arg(long)]
    pub verify: bool,
    /// Path budget for the exhaustive covering check.
    #[arg(long, default_value_t = negpath::verify::DEFAULT_PATH_BUDGET)]
    pub budget: u64,
    /// Write the projection JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the stats JSON here.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("artifact").required(true).args(["projection", "distances", "family"])))]
pub struct VerifyArgs {
    pub graph: PathBuf,
    /// Projection JSON to check against the graph as base.
    #[arg(long)]
    pub projection: Option<PathBuf>,
    /// Distances JSON as written by `solve --json`.
    #[arg(long)]
    pub distances: Option<PathBuf>,
    /// Subgraph family JSON; the graph must be the barrier given by `--meta`.
    #[arg(long, requires = "meta")]
    pub family: Option<PathBuf>,
    /// Barrier metadata JSON as written by `gen barrier`.
    #[arg(long)]
    pub meta: Option<PathBuf>,
    /// Path bound for `--projection`.
    #[arg(long, requires = "projection")]
    pub d: Option<i64>,
    /// Cluster diameter bound for `--projection`; defaults to `lambda * d`.
    #[arg(long, requires = "projection")]
    pub bound: Option<i64>,
    #[arg(long, requires = "projection")]
    pub lambda: Option<u64>,
    /// Do not require lifts to start at representatives.
    #[arg(long)]
    pub any_start: bool,
    #[arg(long, default_value_t = negpath::verify::DEFAULT_PATH_BUDGET)]
    pub budget: u64,
    /// Source for `--distances`, 1-indexed; defaults to the one in the file.
    #[arg(long)]
    pub source: Option<usize>,
    /// Worker threads for independent checks.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    Random,
    Restricted,
    Cycle,
    Barrier,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: Generator,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge count; for `barrier`, the target size.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = -5, allow_negative_numbers = true)]
    pub wmin: i64,
    #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
    pub wmax: i64,
    #[arg(long)]
    pub self_loops: bool,
    /// Chance of the lightest admissible weight (`restricted`).
    #[arg(long, default_value_t = 0.3)]
    pub neg_bias: f64,
    #[arg(long, default_value_t = 1)]
    pub lambda: usize,
    /// Barrier overrides.
    #[arg(long = "L")]
    pub l: Option<usize>,
    #[arg(long = "R")]
    pub r: Option<usize>,
    #[arg(long = "M")]
    pub m_star: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output `.gr`; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Metadata JSON; stderr when absent.
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchEngine {
    Scaling,
    Bf,
    Both,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Directory of `.gr` files, read in name order.
    #[arg(long, conflicts_with_all = ["n", "count"])]
    pub corpus: Option<PathBuf>,
    /// Generate `count` random graphs with `n` vertices instead.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    #[arg(long, default_value_t = -4, allow_negative_numbers = true)]
    pub wmin: i64,
    #[arg(long, default_value_t = 100, allow_negative_numbers = true)]
    pub wmax: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub source: usize,
    #[arg(long, value_enum, default_value = "both")]
    pub engine: BenchEngine,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Worker threads; rows come out in corpus order regardless.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = match cli.cmd {
        Cmd::Solve(a) => commands::solve(a),
        Cmd::Pathcover(a) => commands::pathcover(a),
        Cmd::Verify(a) => commands::verify(a),
        Cmd::Gen(a) => commands::gen(a),
        Cmd::Bench(a) => bench::run(a),
    };
    match out {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
