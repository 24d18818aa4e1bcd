//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "lnsolve",
    about = "Large neighborhood search for pure-binary ILPs: generate benchmark instances, run heuristic portfolios, report metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Write deterministic benchmark instances as canonical .ilp.json files.
    Generate(GenerateArgs),
    /// Run a heuristic portfolio and persist traces plus a per-run summary.
    Run(RunArgs),
    /// Compute report tables from persisted results.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Mvc,
    Mis,
    Sc,
    Mk,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Mvc => "mvc",
            Family::Mis => "mis",
            Family::Sc => "sc",
            Family::Mk => "mk",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetName {
    /// Desk-scale sizes and budgets (minutes per portfolio).
    PaperMini,
    /// Benchmark-scale sizes and budgets (hours per portfolio).
    PaperFull,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TimeMode {
    /// Wall-clock seconds; budgets and traces use real time.
    Wall,
    /// Iteration-counting clock and node-only budgets; runs reproduce
    /// byte-identically.
    Logical,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Benchmark family.
    #[arg(value_enum)]
    pub family: Family,
    /// Number of instances; seeds are seed, seed+1, ...
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = PresetName::PaperMini)]
    pub preset: PresetName,
    /// Graph nodes (mvc/mis).
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Attachment parameter of the preferential-attachment graph (mvc/mis).
    #[arg(long)]
    pub degree_param: Option<usize>,
    /// Variables (sc).
    #[arg(long)]
    pub vars: Option<usize>,
    /// Rows (sc).
    #[arg(long)]
    pub rows: Option<usize>,
    /// Column density per row (sc).
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub cost_lo: Option<u32>,
    #[arg(long)]
    pub cost_hi: Option<u32>,
    /// Items (mk).
    #[arg(long)]
    pub items: Option<usize>,
    /// Knapsacks (mk).
    #[arg(long)]
    pub knapsacks: Option<usize>,
}

#[derive(Debug, Args, Clone)]
pub struct RunArgs {
    /// Instance files or directories of .ilp.json files.
    #[arg(long, num_args = 1..)]
    pub instances: Vec<PathBuf>,
    /// Generate this family on the fly instead of reading files.
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Instance count when generating on the fly.
    #[arg(long)]
    pub count: Option<usize>,
    /// Comma-separated heuristics: RANDOM, GRAPH, LB, LBRELAX, LBRELAX_S,
    /// LBRELAX_RR.
    #[arg(long, value_delimiter = ',', required = true)]
    pub heuristics: Vec<String>,
    #[arg(long, default_value = "runs")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = PresetName::PaperMini)]
    pub preset: PresetName,
    /// Initial neighborhood size; default is the preset's per-family value
    /// or 20% of the variables for unknown instances.
    #[arg(long)]
    pub k0: Option<usize>,
    #[arg(long, default_value_t = 1.02)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Randomized-phase dwell for LBRELAX_RR, in clock units.
    #[arg(long, default_value_t = 30.0)]
    pub gamma: f64,
    /// Keep the neighborhood size fixed at k0.
    #[arg(long)]
    pub fixed_k: bool,
    /// Wall-clock budget per run, seconds.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Iteration budget per run.
    #[arg(long)]
    pub iterations: Option<u64>,
    #[arg(long)]
    pub repair_time_limit: Option<f64>,
    #[arg(long)]
    pub repair_node_limit: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = TimeMode::Wall)]
    pub time_mode: TimeMode,
    /// Metric checkpoints; default quarters of the horizon.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    All,
    Summary,
    Survival,
    BestRate,
    VirtualBest,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// results.jsonl produced by `run`.
    #[arg(long)]
    pub results: PathBuf,
    #[arg(long, default_value = "report")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportKind::All)]
    pub kind: ReportKind,
    /// Evaluation times; default quarters of the recorded horizon.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Vec<f64>,
    /// Survival threshold on the primal gap; default is the median of the
    /// per-approach mean gaps at the horizon, rounded to the nearest 0.05%.
    #[arg(long)]
    pub threshold: Option<f64>,
}
