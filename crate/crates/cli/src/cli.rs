use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::input::InputFormat;

#[derive(Debug, Parser)]
#[command(name = "rga-kit", version, about = "Relative gain array analysis for square, singular and non-square plants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relative gain arrays under one or more generalized inverses
    Rga(RgaArgs),
    /// Recommended loop pairings and ranked alternatives
    Pair(PairArgs),
    /// Check whether a change of units moves the RGA or its pairing
    Audit(AuditArgs),
    /// Parse a transfer-function matrix and report its steady-state gains
    Parse(ParseArgs),
    /// Bundled example plants
    #[command(subcommand)]
    Fixtures(FixturesCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Mp,
    Uc,
    Exact,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Matrix file (.csv, .json) or transfer-function file (.tf, .txt)
    pub path: Option<PathBuf>,
    /// Use a bundled plant instead of a file
    #[arg(long, value_name = "NAME", conflicts_with = "path")]
    pub fixture: Option<String>,
    /// Override format detection from the file extension
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormat>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    /// Singular values at or below this are treated as zero
    #[arg(long, value_name = "TOL")]
    pub rank_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RgaArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = MethodChoice::All)]
    pub method: MethodChoice,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RuleArgs {
    /// Let nonpositive gains compete at their plain |λ - 1| cost
    #[arg(long)]
    pub allow_nonpositive: bool,
    /// Flag chosen pairs whose λ exceeds this
    #[arg(long, value_name = "LAMBDA", default_value_t = 5.0)]
    pub large_lambda: f64,
    /// Cost assigned to nonpositive gains
    #[arg(long, value_name = "COST", default_value_t = 1e6)]
    pub penalty: f64,
    /// Runner-up pairings closer than this count as a near tie
    #[arg(long, value_name = "COST", default_value_t = 0.05)]
    pub tie_epsilon: f64,
    /// Input that every pairing must use (label or 1-based index); repeatable
    #[arg(long = "require-input", value_name = "INPUT")]
    pub require_input: Vec<String>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = MethodChoice::All)]
    pub method: MethodChoice,
    /// Number of ranked pairings to report
    #[arg(short, long, default_value_t = 3)]
    pub k: usize,
    #[command(flatten)]
    pub rules: RuleArgs,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(
    clap::ArgGroup::new("mode")
        .required(true)
        .args(["scenario", "temperature_factor", "fuzz"]),
))]
pub struct AuditArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Built-in scenario (identity, seconds-to-minutes,
    /// temperature-decimation) or a JSON scenario file
    #[arg(long, value_name = "NAME|FILE")]
    pub scenario: Option<String>,
    /// Shrink the temperature unit by this factor using the unit tags
    #[arg(long, value_name = "F")]
    pub temperature_factor: Option<f64>,
    /// Run this many random rescalings instead of one scenario
    #[arg(long, value_name = "N")]
    pub fuzz: Option<usize>,
    #[arg(long, default_value_t = 0, requires = "fuzz")]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-3, requires = "fuzz")]
    pub factor_min: f64,
    #[arg(long, default_value_t = 1e3, requires = "fuzz")]
    pub factor_max: f64,
    /// Ranked baseline pairings kept for comparison
    #[arg(short, long, default_value_t = 3)]
    pub k: usize,
    #[command(flatten)]
    pub rules: RuleArgs,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Also evaluate at s = RE or s = RE,IM
    #[arg(long, value_name = "S", allow_hyphen_values = true)]
    pub at: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum FixturesCommand {
    /// Names and shapes of the bundled plants
    List {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print one bundled plant
    Show {
        name: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}
