//! `wckr`: build, query and benchmark weight-constrained k-step reachability
//! indexes.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wckr::{TieBreak, Variant};

#[derive(Parser, Debug)]
#[command(name = "wckr", version, about = "Weight-constrained k-step reachability indexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an index from an edge list.
    Build(BuildArgs),
    /// Answer queries against a saved index.
    Query(QueryArgs),
    /// Print an index in the `(hop, ws, we, k)` text form.
    Dump(DumpArgs),
    /// Redraw every edge weight uniformly from 0..=sigma.
    GenWeights(GenWeightsArgs),
    /// Generate a random graph with weights in 1..=sigma.
    GenGraph(GenGraphArgs),
    /// Generate a query workload with oracle-checked answers.
    Workload(WorkloadArgs),
    /// Compare index answers with the BFS oracle.
    Verify(VerifyArgs),
    /// Time builds and query batches against the BFS baseline.
    Bench(BenchArgs),
    /// Print graph or index statistics.
    Stats(StatsArgs),
    /// Compute the approximate minimum vertex cover.
    Cover(CoverArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Wkri,
    Gwkri,
    Lwkri,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Wkri => Variant::Wkri,
            VariantArg::Gwkri => Variant::Gwkri,
            VariantArg::Lwkri => Variant::Lwkri,
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
enum TieBreakArg {
    /// Smaller vertex ids first among equal degrees.
    #[default]
    Asc,
    /// Larger vertex ids first among equal degrees.
    Desc,
}

impl From<TieBreakArg> for TieBreak {
    fn from(t: TieBreakArg) -> Self {
        match t {
            TieBreakArg::Asc => TieBreak::AscendingId,
            TieBreakArg::Desc => TieBreak::DescendingId,
        }
    }
}

#[derive(Args, Debug)]
struct BuildArgs {
    /// Edge list: `u v w` per line.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Index file to write; the id map goes to `<output>.ids`.
    #[arg(long, short)]
    output: PathBuf,
    /// Hop order. For wkri, a permutation of all vertices; for gwkri and
    /// lwkri, the cover members in hop order.
    #[arg(long)]
    order_file: Option<PathBuf>,
    /// Tie-break among equal degrees when no order file is given.
    #[arg(long, value_enum, default_value_t)]
    tie_break: TieBreakArg,
    /// Write the cover (selection order, one id per line) to this file.
    #[arg(long)]
    dump_cover: Option<PathBuf>,
    /// lwkri only: skip dominated states at non-cover vertices.
    #[arg(long)]
    prune_uncovered: bool,
}

#[derive(Args, Debug)]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    /// File of `u v ws we k [expected]` lines.
    #[arg(long, conflicts_with = "query")]
    queries: Option<PathBuf>,
    /// A single query, e.g. `-q "v2 v6 5 8 3"`; bounds may be `-inf`/`+inf`.
    #[arg(short = 'q', long = "query", allow_hyphen_values = true)]
    query: Option<String>,
}

#[derive(Args, Debug)]
struct DumpArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenWeightsArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long)]
    sigma: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenGraphArgs {
    #[arg(long)]
    vertices: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long, default_value_t = 10)]
    sigma: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WorkloadArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    total: usize,
    #[arg(long, default_value_t = 0.5)]
    reachable_fraction: f64,
    /// Share of `<= we` / `>= ws` constraints; the rest are `[ws, we]`.
    #[arg(long, default_value_t = 0.5)]
    semi_bounded_fraction: f64,
    /// Smallest constraint bound (defaults to the smallest edge weight).
    #[arg(long)]
    w_min: Option<u32>,
    /// Largest constraint bound (defaults to the largest edge weight).
    #[arg(long)]
    w_max: Option<u32>,
    #[arg(long, default_value_t = 1)]
    k_min: u32,
    #[arg(long, default_value_t = 8)]
    k_max: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Candidate budget for rejection sampling (default 1000 per query).
    #[arg(long)]
    max_attempts: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Comma-separated variants to build and check.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [VariantArg::Wkri, VariantArg::Gwkri, VariantArg::Lwkri])]
    variants: Vec<VariantArg>,
    /// Check this saved index instead of building fresh ones.
    #[arg(long, conflicts_with = "variants")]
    index: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest `k` in sampled queries.
    #[arg(long, default_value_t = 8)]
    max_k: u32,
    /// Graphs with at most this many vertices are checked exhaustively.
    #[arg(long, default_value_t = 10)]
    exhaustive_max_n: usize,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Query file; without it a balanced workload of `--queries` is generated.
    #[arg(long)]
    workload: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [VariantArg::Wkri, VariantArg::Gwkri, VariantArg::Lwkri])]
    variants: Vec<VariantArg>,
    #[arg(long, default_value_t = 3)]
    repeat: usize,
    /// Seconds before a BFS baseline batch is abandoned.
    #[arg(long, default_value_t = 300.0)]
    bfs_timeout: f64,
    #[arg(long)]
    no_bfs: bool,
    #[arg(long, value_enum, default_value_t)]
    tie_break: TieBreakArg,
    /// Dataset name for the report (defaults to the graph file stem).
    #[arg(long)]
    dataset: Option<String>,
    /// Write CSV here; `-` prints CSV instead of the table.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[arg(long, required_unless_present = "index")]
    graph: Option<PathBuf>,
    #[arg(long)]
    index: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoverArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    tie_break: TieBreakArg,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
