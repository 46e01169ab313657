use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pairrank_core::aggregate::{AggregateConfig, EloConfig, InstanceOrder, TrueSkillConfig};
use pairrank_core::synth::SynthMode;
use pairrank_core::{BtConfig, InputFormat, TiePolicy};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "pairrank", version, about = "Aggregate, compare and simulate paired evaluation scores")]
pub struct Cli {
    /// Worker threads for parallel work; results do not depend on it.
    #[arg(long, global = true, env = "PAIRRANK_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank systems under one or more aggregation mechanisms.
    Aggregate(AggregateArgs),
    /// Decide every system pair and optionally run the raw significance tests.
    Compare(CompareArgs),
    /// Run a seeded synthetic sweep and summarise ranking recovery.
    Simulate(SimulateArgs),
    /// Paired-score scatter data and SVG for system pairs.
    Plot(PlotArgs),
    /// List triples whose Bradley-Terry pair order changes when fitted together.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
    Svg,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Self::Table => "table",
            Self::Json => "json",
            Self::Csv => "csv",
            Self::Svg => "svg",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Self::Table => "txt",
            Self::Json => "json",
            Self::Csv => "csv",
            Self::Svg => "svg",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InputFormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TiePolicyArg {
    HalfWin,
    Drop,
}

impl From<TiePolicyArg> for TiePolicy {
    fn from(t: TiePolicyArg) -> Self {
        match t {
            TiePolicyArg::HalfWin => TiePolicy::HalfWin,
            TiePolicyArg::Drop => TiePolicy::Drop,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    SharedOffset,
    #[value(alias = "appendix")]
    PerType,
}

impl From<ModeArg> for SynthMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::SharedOffset => SynthMode::SharedOffset,
            ModeArg::PerType => SynthMode::PerType,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Score file: CSV with one column per system, or JSON.
    #[arg(long, short)]
    pub input: PathBuf,

    /// Defaults to the file extension (`.json` is JSON, anything else CSV).
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormatArg>,
}

impl InputArgs {
    pub fn format(&self) -> InputFormat {
        match self.input_format {
            Some(InputFormatArg::Csv) => InputFormat::Csv,
            Some(InputFormatArg::Json) => InputFormat::Json,
            None if self.input.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => {
                InputFormat::Json
            }
            None => InputFormat::Csv,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Shorthand for `--format json`.
    #[arg(long, conflicts_with = "format")]
    pub json: bool,

    /// Write artifacts into this directory instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

/// Settings of the rating mechanisms.
#[derive(Debug, Args)]
pub struct MechanismArgs {
    #[arg(long, value_enum, default_value = "half-win")]
    pub tie_policy: TiePolicyArg,

    /// Bradley-Terry stops once the squared step falls below this.
    #[arg(long, default_value_t = BtConfig::default().epsilon)]
    pub bt_epsilon: f64,

    #[arg(long, default_value_t = BtConfig::default().max_iterations)]
    pub bt_max_iterations: usize,

    #[arg(long, default_value_t = EloConfig::default().k_factor)]
    pub elo_k: f64,

    #[arg(long, default_value_t = EloConfig::default().initial_rating)]
    pub elo_initial: f64,

    #[arg(long, default_value_t = EloConfig::default().base)]
    pub elo_base: f64,

    #[arg(long, default_value_t = EloConfig::default().scale)]
    pub elo_scale: f64,

    /// Play Elo instances in an order shuffled with `--seed`.
    #[arg(long)]
    pub elo_shuffle: bool,

    #[arg(long, default_value_t = TrueSkillConfig::default().mu0)]
    pub ts_mu: f64,

    #[arg(long, default_value_t = TrueSkillConfig::default().sigma0)]
    pub ts_sigma: f64,

    #[arg(long, default_value_t = TrueSkillConfig::default().beta)]
    pub ts_beta: f64,

    #[arg(long, default_value_t = TrueSkillConfig::default().tau)]
    pub ts_tau: f64,

    #[arg(long, default_value_t = TrueSkillConfig::default().draw_probability)]
    pub ts_draw_probability: f64,
}

impl MechanismArgs {
    pub fn config(&self, seed: u64) -> AggregateConfig {
        AggregateConfig {
            tie_policy: self.tie_policy.into(),
            bt: BtConfig {
                epsilon: self.bt_epsilon,
                max_iterations: self.bt_max_iterations,
            },
            elo: EloConfig {
                k_factor: self.elo_k,
                initial_rating: self.elo_initial,
                base: self.elo_base,
                scale: self.elo_scale,
                instance_order: if self.elo_shuffle {
                    InstanceOrder::Shuffled(seed)
                } else {
                    InstanceOrder::Given
                },
            },
            trueskill: TrueSkillConfig {
                mu0: self.ts_mu,
                sigma0: self.ts_sigma,
                beta: self.ts_beta,
                tau: self.ts_tau,
                draw_probability: self.ts_draw_probability,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Comma-separated mechanisms (mean, median, bt, elo, trueskill) or `all`.
    #[arg(long, short, value_delimiter = ',', default_value = "all")]
    pub mechanism: Vec<String>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub mechanisms: MechanismArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Comma-separated subset of mean, median, bt, or `all`.
    #[arg(long, short, value_delimiter = ',', default_value = "all")]
    pub mechanism: Vec<String>,

    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Also run raw tests per pair: `all` or a list of paired_t, sign, wilcoxon, mood.
    #[arg(long, value_delimiter = ',')]
    pub tests: Vec<String>,

    /// Only this pair, as `A,B`; repeatable. Defaults to every pair.
    #[arg(long)]
    pub pair: Vec<String>,

    #[arg(long, value_enum, default_value = "half-win")]
    pub tie_policy: TiePolicyArg,

    /// Bootstrap resamples for the median decision.
    #[arg(long, default_value_t = 1000)]
    pub resamples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Directory for setups, manifest and reports.
    #[arg(long)]
    pub out: PathBuf,

    /// Full grid: types 1,3,5,10; outliers 0,0.01,0.025; systems 2,3,5,10,25,50;
    /// instances 10,30,100,200; 10 replicates.
    #[arg(long, conflicts_with_all = ["types", "outliers", "systems", "instances"])]
    pub paper_grid: bool,

    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 10])]
    pub types: Vec<usize>,

    #[arg(long, value_delimiter = ',', default_values_t = [0.0f64, 0.025])]
    pub outliers: Vec<f64>,

    #[arg(long, value_delimiter = ',', default_values_t = [5usize])]
    pub systems: Vec<usize>,

    #[arg(long, value_delimiter = ',', default_values_t = [30usize, 200])]
    pub instances: Vec<usize>,

    /// Setups per grid cell [default: 30, or 10 with --paper-grid].
    #[arg(long)]
    pub replicates: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,

    #[arg(long, default_value_t = 1.0)]
    pub offset_scale: f64,

    #[arg(long, value_enum, default_value = "shared-offset")]
    pub mode: ModeArg,

    /// Mechanisms whose rankings are scored against the latent order.
    #[arg(long, short, value_delimiter = ',', default_value = "mean,median,bt")]
    pub mechanism: Vec<String>,

    /// Bootstrap resamples for the per-cell confidence intervals.
    #[arg(long, default_value_t = 1000)]
    pub resamples: usize,

    /// Also measure how often the four tests agree on significance.
    #[arg(long)]
    pub overlap: bool,

    /// Significance level for `--overlap`.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Skip writing one CSV per setup.
    #[arg(long)]
    pub no_setups: bool,

    #[command(flatten)]
    pub mechanisms: MechanismArgs,

    /// Summary printed to stdout.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    #[arg(long, conflicts_with = "format")]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Pair to plot as `A,B` (A on the x axis); repeatable. Defaults to every pair.
    #[arg(long)]
    pub pair: Vec<String>,

    /// Bins of the paired-difference histogram.
    #[arg(long, default_value_t = 10)]
    pub bins: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, value_enum, default_value = "half-win")]
    pub tie_policy: TiePolicyArg,

    #[arg(long, default_value_t = BtConfig::default().epsilon)]
    pub bt_epsilon: f64,

    #[arg(long, default_value_t = BtConfig::default().max_iterations)]
    pub bt_max_iterations: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}
