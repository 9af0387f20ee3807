//! Command-line arguments.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use ordlab_core::sampler::Param;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[command(
    name = "ordlab",
    version,
    about = "Sample and statistically verify consistent random vertex orderings"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Common {
    /// Master seed; every random stream is derived from it by name.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of draws (per side for two-sample tests).
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    /// Mod-1 offset: a number in [0, 1] or `auto`.
    #[arg(long, global = true)]
    pub alpha: Option<Param>,
    /// Spectral perturbation: a number or `auto`.
    #[arg(long, global = true)]
    pub epsilon: Option<Param>,
    /// Largest tuple size in consistency and uniformity checks.
    #[arg(long, global = true)]
    pub kmax: Option<u8>,
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub significance: f64,
    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Write an experiment record (config, output, timing) to this path.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Draw orderings; one per line as a JSON array of vertices.
    Sample(SampleArgs),
    /// Run the consistency or uniformity battery and print the test reports.
    Verify(VerifyArgs),
    /// Classify a hereditary property as uniform, non-uniform or unknown.
    Classify(ClassifyArgs),
    /// Evaluate a closed-form probability.
    Oracle(OracleArgs),
    /// Statistics of the ordering on a finite blow-up of a template.
    BlowupStats(BlowupArgs),
    /// Run a named reproduction experiment and check its criterion.
    Repro(ReproArgs),
}

/// The graph and sampler a command runs on.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SamplerArgs {
    /// Edge-list or graph6 file, or a graph name such as `P3`, `K2+K1`, `flower2`.
    #[arg(long)]
    pub graph: String,
    /// uniform, block, spectral, mod1_edge, disjoint_copies, double_broom or flower.
    #[arg(long, default_value = "uniform")]
    pub sampler: String,
    /// Pattern graph for disjoint_copies (file or name).
    #[arg(long)]
    pub pattern: Option<String>,
    /// SamplerSpec JSON file; its seed is replaced by --seed.
    #[arg(long, conflicts_with_all = ["sampler", "pattern"])]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SampleArgs {
    #[command(flatten)]
    pub target: SamplerArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Consistency,
    Uniformity,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub target: SamplerArgs,
    #[arg(long, value_enum, default_value_t = CheckKind::Consistency)]
    pub check: CheckKind,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(group(ArgGroup::new("property").required(true).args(["forbidden", "oracle", "template"])))]
pub struct ClassifyArgs {
    /// File of edge-list blocks (or graph6 lines), or comma-separated graph names.
    #[arg(long)]
    pub forbidden: Option<String>,
    /// Built-in oracle: forests, triangle-free, bipartite, planar, bounded-degree:D, flowers, ...
    #[arg(long)]
    pub oracle: Option<String>,
    /// Template JSON file or compact form such as `ff` or `fe:0-1`.
    #[arg(long)]
    pub template: Option<String>,
    #[arg(long, default_value_t = 5)]
    pub max_order: usize,
    #[arg(long, default_value_t = 2)]
    pub reps: usize,
    #[arg(long, default_value_t = 2)]
    pub pad: usize,
    #[arg(long, default_value_t = 3)]
    pub n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    /// One or two extra uniforms below the k-th of n conditioned variables.
    Addx,
    /// Order-reversal difference for two negatively signed variables.
    Edgedist,
    /// B_n(x).
    Bernoulli,
    /// The zeros of B_n in [0, 1].
    Zeros,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaKind {
    Pair,
    Triple,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub formula: Formula,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of extra variables for addx (1 or 2).
    #[arg(long, default_value_t = 1)]
    pub j: u8,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long, value_enum, default_value_t = DeltaKind::Pair)]
    pub order: DeltaKind,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BlowupArgs {
    /// Template JSON file or compact form such as `ff` or `fe:0-1`.
    #[arg(long)]
    pub template: String,
    #[arg(long, default_value = "uniform")]
    pub sampler: String,
    #[arg(long, default_value_t = ordlab_core::lab::blowup::DEFAULT_MULTIPLICITY)]
    pub multiplicity: usize,
    #[arg(long, default_value_t = 0)]
    pub u: usize,
    #[arg(long, default_value_t = 1)]
    pub v: usize,
    /// Repeat at multiplicities 50, 100 and 200 and report the drift.
    #[arg(long)]
    pub ladder: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum ReproName {
    #[value(name = "uniform-baseline")]
    #[serde(rename = "uniform-baseline")]
    UniformBaseline,
    #[value(name = "block-K2K1")]
    #[serde(rename = "block-K2K1")]
    BlockK2K1,
    #[value(name = "spectral-P3")]
    #[serde(rename = "spectral-P3")]
    SpectralP3,
    #[value(name = "mod1-P3")]
    #[serde(rename = "mod1-P3")]
    Mod1P3,
    #[value(name = "doublebroom-P5")]
    #[serde(rename = "doublebroom-P5")]
    DoubleBroomP5,
    #[value(name = "flower-inconsistency")]
    #[serde(rename = "flower-inconsistency")]
    FlowerInconsistency,
    #[value(name = "template-KplusK")]
    #[serde(rename = "template-KplusK")]
    TemplateKplusK,
    #[value(name = "addx-grid")]
    #[serde(rename = "addx-grid")]
    AddxGrid,
    #[value(name = "edgedist-grid")]
    #[serde(rename = "edgedist-grid")]
    EdgedistGrid,
}

impl ReproName {
    pub const ALL: [ReproName; 9] = [
        ReproName::UniformBaseline,
        ReproName::BlockK2K1,
        ReproName::SpectralP3,
        ReproName::Mod1P3,
        ReproName::DoubleBroomP5,
        ReproName::FlowerInconsistency,
        ReproName::TemplateKplusK,
        ReproName::AddxGrid,
        ReproName::EdgedistGrid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReproName::UniformBaseline => "uniform-baseline",
            ReproName::BlockK2K1 => "block-K2K1",
            ReproName::SpectralP3 => "spectral-P3",
            ReproName::Mod1P3 => "mod1-P3",
            ReproName::DoubleBroomP5 => "doublebroom-P5",
            ReproName::FlowerInconsistency => "flower-inconsistency",
            ReproName::TemplateKplusK => "template-KplusK",
            ReproName::AddxGrid => "addx-grid",
            ReproName::EdgedistGrid => "edgedist-grid",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub name: ReproName,
}
