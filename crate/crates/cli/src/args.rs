use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use memplan_core::KvCacheStrategy;

#[derive(Debug, Parser)]
#[command(name = "memplan", version, about = "Memory-aware deployment planning for reasoning models")]
pub struct Cli {
    /// Output format. `machine` prints one JSON envelope per invocation.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Model spec file; defaults to the builtin Qwen3 catalog.
    #[arg(long, env = "MEMPLAN_SPEC", global = true)]
    pub spec: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weight, KV, total and amortized memory for one configuration.
    Memory(MemoryArgs),
    /// Pareto frontier of a measurement dataset, as CSV.
    Frontier(FrontierArgs),
    /// Best configuration under a budget.
    Plan(PlanArgs),
    /// Majority-vote accuracy over sample pools.
    Estimate(EstimateArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

fn kv(s: &str) -> Result<KvCacheStrategy, String> {
    s.parse().map_err(|e: memplan_core::MemoryError| e.to_string())
}

#[derive(Debug, Args)]
pub struct MemoryArgs {
    #[arg(long)]
    pub model: String,
    /// Weight precision: 4, 8 or 16.
    #[arg(long)]
    pub wbits: u32,
    /// KV strategy: `full`, `evict:<tokens>`, `quant:<bits>` or
    /// `quant:<bits>/g<group>/s<scale>/z<zero>/r<residual>`.
    #[arg(long, default_value = "full", value_parser = kv)]
    pub kv: KvCacheStrategy,
    /// Token budget T per generation.
    #[arg(long)]
    pub tokens: u64,
    /// Parallel samples G.
    #[arg(long, default_value_t = 1)]
    pub group: u32,
    /// Amortization batch B.
    #[arg(long, default_value_t = 1)]
    pub batch: u32,
}

/// Dataset restrictions shared by `frontier` and `plan`. Repeat a flag to
/// allow several values.
#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long = "only-model")]
    pub models: Vec<String>,
    #[arg(long = "only-wbits")]
    pub precisions: Vec<u32>,
    #[arg(long = "only-kv", value_parser = kv)]
    pub kv_strategies: Vec<KvCacheStrategy>,
    #[arg(long = "only-tokens")]
    pub token_budgets: Vec<u64>,
    #[arg(long = "only-group")]
    pub group_sizes: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Memory,
    Latency,
    Throughput,
}

#[derive(Debug, Args)]
pub struct FrontierArgs {
    /// Measurement dataset (JSON lines).
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, value_enum, default_value_t = AxisArg::Memory)]
    pub axis: AxisArg,
    /// Amortization batch for the memory axis.
    #[arg(long, default_value_t = 1)]
    pub batch: u32,
    #[command(flatten)]
    pub filters: FilterArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Memory,
    Latency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskArg {
    Math,
    Knowledge,
    Unspecified,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// Memory budget (`12GiB`, `8.5GB`, `4096`, `inf`) or, with
    /// `--objective latency`, seconds.
    #[arg(long, default_value = "inf")]
    pub budget: String,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Memory)]
    pub objective: ObjectiveArg,
    /// Amortization batch; memory cost becomes weights / B + KV.
    #[arg(long)]
    pub batch: Option<u32>,
    #[arg(long, value_enum, default_value_t = TaskArg::Unspecified)]
    pub task: TaskArg,
    /// Skip rule annotations.
    #[arg(long)]
    pub no_annotate: bool,
    /// Search space file (JSON); defaults to the dataset's own axes.
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[command(flatten)]
    pub filters: FilterArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TiesArg {
    Uniform,
    FirstSampled,
    CountAsWrong,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Sample pools (JSON lines).
    #[arg(long)]
    pub pools: PathBuf,
    #[arg(long)]
    pub group: u32,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 100_000)]
    pub resamples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = TiesArg::Uniform)]
    pub ties: TiesArg,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub bind: String,
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Named pool set, `name=path`. Repeatable.
    #[arg(long = "pool-set")]
    pub pool_sets: Vec<String>,
    /// Allow any origin (local UI development).
    #[arg(long)]
    pub cors: bool,
}
