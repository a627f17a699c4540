mod commands;
mod input;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable overriding the default search budget.
pub const BUDGET_ENV: &str = "GRACEPATH_BUDGET";
/// Default backtracking node budget when neither `--budget` nor the
/// environment sets one.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 70;

/// Hamiltonian paths and cycles with pairwise-distinct absolute differences.
#[derive(Parser, Debug)]
#[command(name = "gracepath", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a permutation of [n] from start s with distinct differences.
    Construct(ConstructArgs),
    /// Check a sequence over a set: exit 0 if graceful, 1 otherwise.
    Verify(VerifyArgs),
    /// Tabulate every (n, s) with n up to NMAX as CSV.
    Sweep(SweepArgs),
    /// Difference statistics, additive energy and the expectation bound.
    Stats(StatsArgs),
    /// Search for a cyclic ordering with n distinct differences.
    Cycle(CycleArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    pub n: usize,
    pub s: usize,
    /// Map the result onto the progression FIRST + (k-1)*STEP.
    #[arg(long, value_name = "FIRST,STEP", allow_hyphen_values = true)]
    pub ap: Option<String>,
    /// Include the rule applications of the construction.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
#[group(id = "set_source", required = true, multiple = false)]
pub struct SetSource {
    /// Inline set, e.g. `1..10` or `0,1,3,7` or `1/2,3/4`.
    #[arg(long, allow_hyphen_values = true, group = "set_source")]
    pub set: Option<String>,
    /// File with one element (or range) per line.
    #[arg(long, value_name = "PATH", group = "set_source")]
    pub set_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SetSource,
    /// The sequence to check; `-` reads the first line of stdin.
    #[arg(long, allow_hyphen_values = true)]
    pub seq: String,
    /// Required first element; defaults to the sequence's own first element.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    /// Treat the sequence as a cycle, including the wrap-around difference.
    #[arg(long)]
    pub cycle: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Construct,
    Oracle,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    pub nmax: usize,
    #[arg(long, value_enum, default_value = "construct")]
    pub mode: SweepMode,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
    /// Node budget per oracle search (0 = unlimited).
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[command(flatten)]
    pub source: SetSource,
    /// Monte Carlo trials; 0 skips the simulation.
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also enumerate every circular arrangement (at most 8 elements).
    #[arg(long)]
    pub exact: bool,
    /// Node budget for the cycle search run with --exact (0 = unlimited).
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CycleArgs {
    #[command(flatten)]
    pub source: SetSource,
    /// Backtracking node budget (0 = unlimited).
    #[arg(long)]
    pub budget: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Verify(a) => commands::verify(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Stats(a) => commands::stats(a),
        Command::Cycle(a) => commands::cycle(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("gracepath: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
