use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rumor_core::{GraphSpec, Model, OverflowPolicy, Protocol, TieBreak, DEFAULT_MAX_ROUNDS};

#[derive(Parser, Debug)]
#[command(
    name = "rumor",
    version,
    about = "Push/Pull rumor spreading with and without node buffers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a graph and write it as an edge list.
    Gen(GenArgs),
    /// Simulate one run and print its completion round.
    Run(RunArgs),
    /// Run the classical and buffered models on shared randomness and compare them.
    Couple(CoupleArgs),
    /// Evaluate the time bounds for a graph.
    Bounds(BoundsArgs),
    /// Run a JSON experiment plan and emit CSV.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    Complete,
    Path,
    Star,
    StarChain,
    RandomRegular,
}

/// Where the graph comes from: an edge-list file or a generator.
#[derive(Args, Debug)]
pub struct GraphArgs {
    /// Edge-list file to load (alternative to --kind).
    #[arg(long, value_name = "FILE", conflicts_with = "kind")]
    pub graph: Option<PathBuf>,
    /// Graph family to generate.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Node count (complete, path, random-regular).
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of stars (star-chain).
    #[arg(long)]
    pub d: Option<usize>,
    /// Leaves per star (star, star-chain).
    #[arg(long)]
    pub delta: Option<usize>,
    /// Common degree (random-regular).
    #[arg(long)]
    pub degree: Option<usize>,
}

impl GraphArgs {
    pub fn to_spec(&self, seed: u64) -> Result<GraphSpec, String> {
        if let Some(path) = &self.graph {
            return Ok(GraphSpec::EdgeListFile { path: path.clone() });
        }
        let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| format!("--{flag} is required for this --kind"));
        Ok(match self.kind {
            None => return Err("one of --graph or --kind is required".into()),
            Some(Kind::Complete) => GraphSpec::Complete { n: need(self.n, "n")? },
            Some(Kind::Path) => GraphSpec::Path { n: need(self.n, "n")? },
            Some(Kind::Star) => GraphSpec::Star {
                delta: need(self.delta, "delta")?,
            },
            Some(Kind::StarChain) => GraphSpec::StarChain {
                d: need(self.d, "d")?,
                delta: need(self.delta, "delta")?,
            },
            Some(Kind::RandomRegular) => GraphSpec::RandomRegular {
                n: need(self.n, "n")?,
                degree: need(self.degree, "degree")?,
                seed,
            },
        })
    }
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Seed for random-regular graphs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (default: stdout).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Seed for random-regular graphs.
    #[arg(long, default_value_t = 0)]
    pub graph_seed: u64,
    /// push, pull or push-pull.
    #[arg(long)]
    pub protocol: Protocol,
    /// buffered or classical.
    #[arg(long, default_value = "buffered")]
    pub model: Model,
    /// Node that starts with the rumor.
    #[arg(long, default_value_t = 0)]
    pub source: usize,
    /// Run seed.
    #[arg(long, env = "GOSSIP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// uniform-random or port-order.
    #[arg(long, default_value = "uniform-random")]
    pub tie_break: TieBreak,
    /// Round cap; reaching it exits with status 2.
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    pub max_rounds: u64,
    /// Per-node buffer capacity (default: unbounded).
    #[arg(long)]
    pub buffer_capacity: Option<usize>,
    /// drop-tail or drop-head, applied when a bounded buffer is full.
    #[arg(long, default_value = "drop-tail")]
    pub overflow: OverflowPolicy,
    /// Write the per-round trace as JSON lines to this file.
    #[arg(long, value_name = "FILE")]
    pub trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CoupleArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Seed for random-regular graphs.
    #[arg(long, default_value_t = 0)]
    pub graph_seed: u64,
    /// push, pull or push-pull.
    #[arg(long)]
    pub protocol: Protocol,
    /// Node that starts with the rumor.
    #[arg(long, default_value_t = 0)]
    pub source: usize,
    /// Number of coupled runs.
    #[arg(long)]
    pub seeds: usize,
    /// Base seed from which the per-run seeds are derived.
    #[arg(long, env = "GOSSIP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// uniform-random or port-order.
    #[arg(long, default_value = "uniform-random")]
    pub tie_break: TieBreak,
    /// Round cap per model.
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    pub max_rounds: u64,
    /// Output file for the JSON report (default: stdout).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Seed for random-regular graphs.
    #[arg(long, default_value_t = 0)]
    pub graph_seed: u64,
    /// JSON file with the constants {"regular", "general", "sqrt", "coupon"}; missing keys default to 1.
    #[arg(long, value_name = "FILE")]
    pub constants: Option<PathBuf>,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    /// Output file (default: stdout).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    /// JSON experiment plan.
    pub plan: PathBuf,
    /// Write per-trial results CSV to this file.
    #[arg(long, value_name = "FILE")]
    pub results: Option<PathBuf>,
    /// Write the summary CSV to this file (default: stdout).
    #[arg(long, value_name = "FILE")]
    pub summary: Option<PathBuf>,
    /// Worker threads for trials; output does not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Override the plan's base_seed.
    #[arg(long, env = "GOSSIP_SEED")]
    pub base_seed: Option<u64>,
}
