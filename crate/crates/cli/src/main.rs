//! `pressurelab`: pressure estimates, cross-engine comparisons and sweeps.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit code for malformed input or configuration.
const EXIT_CONFIG: u8 = 2;
/// Exit code when a comparison exceeds its tolerance.
const EXIT_TOLERANCE: u8 = 3;
/// Exit code when an instance exceeds a size guard.
const EXIT_GUARD: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "pressurelab", version, about = "Pressure of subsets of subshifts of finite type")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// System file, or a builtin: `full:<A>[:<theta>]`, `golden[:<theta>]`.
    #[arg(long, default_value = "full:2")]
    system: String,
    /// Potential file, or `zero`, or `first:<v0>,<v1>,...`.
    #[arg(long, default_value = "zero")]
    potential: String,
    /// `whole`, `subsft:FILE` or `cylinders:w1,w2,...`.
    #[arg(long = "Z", default_value = "whole")]
    z: String,
    /// Mistake function: `zero`, `const:<c>`, `linear`, `log:<a>`.
    #[arg(long)]
    g: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    eps0: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
    /// Record wall-clock times (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
    /// `key=value` file; command-line flags take precedence.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ball pressure along a radius schedule.
    #[command(args_override_self = true)]
    Pressure(commands::PressureArgs),
    /// String pressure along a cover-level schedule.
    #[command(name = "cover-pressure", args_override_self = true)]
    CoverPressure(commands::CoverArgs),
    /// All ball and string pipelines on one schedule, checked against a tolerance.
    #[command(args_override_self = true)]
    Compare(commands::CompareArgs),
    /// Randomized check of the ball inclusion chain.
    #[command(name = "lemma-check", args_override_self = true)]
    LemmaCheck(commands::LemmaArgs),
    /// Substitution counts and the growth exponent γ.
    #[command(args_override_self = true)]
    Stirling(commands::StirlingArgs),
    /// Grid of critical values over levels, lengths and mistake functions.
    #[command(args_override_self = true)]
    Sweep(commands::SweepArgs),
    /// Reference values: transfer matrix, word counts, exact cover infimum.
    #[command(args_override_self = true)]
    Oracle(commands::OracleArgs),
}

/// Raised when a comparison fails its tolerance.
#[derive(Debug)]
pub struct ToleranceFailure(pub String);

impl std::fmt::Display for ToleranceFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ToleranceFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ToleranceFailure>().is_some() {
        return EXIT_TOLERANCE;
    }
    match err.downcast_ref::<pressurelab::Error>() {
        Some(pressurelab::Error::InstanceTooLarge(_) | pressurelab::Error::CensusTooLarge { .. }) => EXIT_GUARD,
        _ => EXIT_CONFIG,
    }
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("PRESSURELAB_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("PRESSURELAB_THREADS=`{v}` is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run() -> anyhow::Result<()> {
    init_threads()?;
    let args = config::expand_args(std::env::args_os().collect())?;
    let cli = Cli::parse_from(args);
    match cli.command {
        Command::Pressure(a) => commands::pressure(a),
        Command::CoverPressure(a) => commands::cover_pressure(a),
        Command::Compare(a) => commands::compare(a),
        Command::LemmaCheck(a) => commands::lemma_check(a),
        Command::Stirling(a) => commands::stirling(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Oracle(a) => commands::oracle(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
