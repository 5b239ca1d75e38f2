//! Batch CLI: compute signatures and log-signatures from delimited files,
//! run log-ODE solves, kernel/Gram/MMD jobs, and the insider-trader demo.
//! Reports are JSON on stdout (or `--output`), always echoing the resolved
//! configuration and input digests.
//!
//! Exit codes: 0 success, 2 input or validation errors, 1 internal numerical
//! failure.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "pathsig",
    version,
    about = "Signature toolkit for multichannel streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated signature of one delimited time-series file
    Sig(SigArgs),
    /// Log-signature in Lyndon coordinates
    Logsig(SigArgs),
    /// Solve a linear CDE driven by a path file via the log-ODE method
    Logode(LogodeArgs),
    /// Signature kernel of a path pair, or Gram matrix over collections
    Kernel(KernelArgs),
    /// Unbiased MMD² between two sample collections
    Mmd(MmdArgs),
    /// Insider-trader demo: depth-3 signature features of categorical ticks
    DemoInsider(DemoInsiderArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DelimiterArg {
    Comma,
    Tab,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MissingArg {
    /// Forward fill; leading gaps take the first observation
    Ffill,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Linear,
    Rbf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Field delimiter of delimited inputs
    #[arg(long, value_enum, default_value_t = DelimiterArg::Comma)]
    delimiter: DelimiterArg,
    /// Inputs carry a header row
    #[arg(long)]
    header: bool,
}

#[derive(Args)]
struct SigArgs {
    /// Input table: first column time, remaining columns channels
    #[arg(long)]
    input: PathBuf,
    /// Truncation depth
    #[arg(long)]
    depth: usize,
    /// Include time as channel 1
    #[arg(long)]
    time_augment: bool,
    /// Missing-value policy
    #[arg(long, value_enum, default_value_t = MissingArg::Ffill)]
    missing: MissingArg,
    /// Recompute and compare against a previous report; mismatching
    /// coefficients exit with code 1
    #[arg(long)]
    verify: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct LogodeArgs {
    /// Driving path table
    #[arg(long)]
    input: PathBuf,
    /// JSON vector-field block: {"v":…, "d":…, "matrices":[[row-major]…], "z0":[…]}
    #[arg(long)]
    field: PathBuf,
    /// Log-signature depth per step
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Number of uniform partition steps over the path span
    #[arg(long, default_value_t = 32)]
    steps: usize,
    /// RK4 substeps per partition step
    #[arg(long, default_value_t = 8)]
    substeps: usize,
    /// Initial state, comma-separated (overrides "z0" in the field block)
    #[arg(long)]
    z0: Option<String>,
    /// Include time as channel 1
    #[arg(long)]
    time_augment: bool,
    /// Missing-value policy
    #[arg(long, value_enum, default_value_t = MissingArg::Ffill)]
    missing: MissingArg,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct KernelArgs {
    /// First path file, or a directory of path files
    #[arg(long)]
    input: PathBuf,
    /// Second path file or directory; omitted = symmetric Gram over --input
    #[arg(long)]
    input_b: Option<PathBuf>,
    /// Static kernel on state space
    #[arg(long, value_enum, default_value_t = KernelArg::Linear)]
    kernel: KernelArg,
    /// RBF bandwidth
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Dyadic refinement: each segment splits into 2^refine grid cells
    #[arg(long, default_value_t = 4)]
    refine: usize,
    /// Include time as channel 1
    #[arg(long)]
    time_augment: bool,
    /// Missing-value policy
    #[arg(long, value_enum, default_value_t = MissingArg::Ffill)]
    missing: MissingArg,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct MmdArgs {
    /// Directory (or file) of sample paths drawn from P
    #[arg(long)]
    input: PathBuf,
    /// Directory (or file) of sample paths drawn from Q
    #[arg(long)]
    input_b: PathBuf,
    /// Static kernel on state space
    #[arg(long, value_enum, default_value_t = KernelArg::Linear)]
    kernel: KernelArg,
    /// RBF bandwidth
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Dyadic refinement level
    #[arg(long, default_value_t = 4)]
    refine: usize,
    /// Include time as channel 1
    #[arg(long)]
    time_augment: bool,
    /// Missing-value policy
    #[arg(long, value_enum, default_value_t = MissingArg::Ffill)]
    missing: MissingArg,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct DemoInsiderArgs {
    /// Tick file: two columns (time, category), labels call|trade|move
    #[arg(long)]
    input: PathBuf,
    /// Signature truncation depth
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[command(flatten)]
    common: CommonArgs,
}

/// Failures classified by exit code.
pub enum CliError {
    /// Bad flags, malformed or inconsistent input files → exit 2.
    Usage(String),
    /// The computation itself failed numerically → exit 1.
    Numeric(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        Self::Usage(e.to_string())
    }

    fn numeric(e: impl std::fmt::Display) -> Self {
        Self::Numeric(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sig(args) => commands::run_sig(&args, false),
        Command::Logsig(args) => commands::run_sig(&args, true),
        Command::Logode(args) => commands::run_logode(&args),
        Command::Kernel(args) => commands::run_kernel(&args),
        Command::Mmd(args) => commands::run_mmd(&args),
        Command::DemoInsider(args) => commands::run_demo_insider(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
