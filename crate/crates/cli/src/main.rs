use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use output::CliError;

#[derive(Debug, Parser)]
#[command(name = "aumcf", version, about = "AUMCF estimation, contrasts and simulation for recurrent events with a terminal event")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-arm AUMCF with influence-function confidence intervals.
    Estimate(AnalysisArgs),
    /// Two-arm contrast (difference or ratio), optionally covariate-adjusted or type-weighted.
    Compare(AnalysisArgs),
    /// Long-format MCF and Kaplan-Meier points per arm, clipped at tau.
    Curves(AnalysisArgs),
    /// Operating characteristics of a simulation scenario (TOML config).
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ContrastArg {
    Diff,
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ContinuityArg {
    LeftLimit,
    RightContinuous,
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    /// Long-format CSV: id,time,status,arm[,event_type][,covariates...]
    #[arg(long, short)]
    input: PathBuf,
    /// Truncation time.
    #[arg(long)]
    tau: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = ContrastArg::Diff)]
    contrast: ContrastArg,
    /// Covariate columns for augmentation, e.g. `age,score`.
    #[arg(long, value_delimiter = ',')]
    covariates: Vec<String>,
    /// Event-type weights, e.g. `1=1.0,2=0.5`.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<String>,
    /// Fail instead of warning when tau exceeds an arm's largest follow-up.
    #[arg(long)]
    strict_tau: bool,
    /// Survival factor inside the MCF integrand.
    #[arg(long, value_enum, default_value_t = ContinuityArg::LeftLimit)]
    continuity: ContinuityArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario TOML file.
    config: PathBuf,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's replicate count.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, value_enum, default_value_t = ContrastArg::Diff)]
    contrast: ContrastArg,
    /// Run replicates on one thread.
    #[arg(long)]
    serial: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Estimate(args) => commands::estimate(&args),
        Command::Compare(args) => commands::compare(&args),
        Command::Curves(args) => commands::curves(&args),
        Command::Simulate(args) => commands::simulate(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
    }
}
