//! `symdyn`: digit expansions, normality diagnostics, generic-point
//! synthesis and the two stream reductions from the command line.

mod commands;
mod specs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use symdyn_core::reduction::Mode;
use symdyn_core::Error;

#[derive(Debug, Parser)]
#[command(name = "symdyn", version, about = "Computational symbolic dynamics toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Seed for every random choice; echoed into reports.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// `paper` (exact schedule) or `scaled[:K]` (NON-PAPER demonstration schedule).
    #[arg(long, global = true, default_value = "paper", value_parser = parse_mode)]
    pub mode: Mode,
    /// Refinement cap in bits for certified digit extraction.
    #[arg(long, global = true, env = "SYMDYN_PRECISION", default_value_t = symdyn_core::arith::DEFAULT_PRECISION_BITS)]
    pub precision: u32,
    /// Write the JSON report here instead of printing a summary only.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    Mode::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand a point in a numeration system.
    Expand(commands::ExpandArgs),
    /// Goodness and convergence diagnostics of a stream against an oracle.
    Normality(commands::NormalityArgs),
    /// Synthesize a generic point for an oracle.
    Synthesize(commands::SynthesizeArgs),
    /// Run a reduction α ↦ y and verify the dichotomy.
    Reduce(commands::ReduceArgs),
    /// Re-verify a reduction run from its stream and trace sidecar.
    Verify(commands::VerifyArgs),
}

/// Exit codes: 0 success, 1 other failure, 2 undecided arithmetic,
/// 3 contract violation.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_undecided() => 2,
        Some(
            Error::ScheduleViolation(_)
            | Error::ScheduleInfeasible(_)
            | Error::GluerFailure(_)
            | Error::TruncatedTrace(_)
            | Error::NotClosed
            | Error::NotAdmissible(_)
            | Error::SafeSymbol(_)
            | Error::StreamExhausted { .. }
            | Error::RetryBudgetExhausted { .. }
            | Error::LengthMismatch { .. }
            | Error::OutOfDomain(_),
        ) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !cli.global.mode.is_paper() {
        eprintln!("*** mode {}: schedule factors are K·2^n instead of 2^(2n) ***", cli.global.mode);
    }
    let result = match cli.command {
        Command::Expand(a) => commands::expand(&cli.global, a),
        Command::Normality(a) => commands::normality(&cli.global, a),
        Command::Synthesize(a) => commands::synthesize(&cli.global, a),
        Command::Reduce(a) => commands::reduce(&cli.global, a),
        Command::Verify(a) => commands::verify(&cli.global, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
