//! Command-line interface for continuity-scaling causal inference.

mod flags;
mod generate;
mod io;
mod manifest;
mod run;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "cscale",
    version,
    about = "Detect and quantify causal influence between time series by continuity scaling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate benchmark systems as CSV.
    #[command(subcommand)]
    Generate(generate::GenerateCommand),
    /// Select or apply delay-embedding parameters.
    Embed(run::EmbedArgs),
    /// Detect causation in both directions between two series.
    Detect(run::DetectArgs),
    /// Infer the full directed network over all series.
    Network(run::NetworkArgs),
    /// Compute ROC/AUROC of scored edges against a truth edge list.
    Evaluate(run::EvaluateArgs),
}

/// Marker for invalid flag combinations (exit code 2, like parse errors).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(cmd) => generate::run(cmd),
        Command::Embed(args) => run::embed(args),
        Command::Detect(args) => run::detect(args),
        Command::Network(args) => run::network(args),
        Command::Evaluate(args) => run::evaluate(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
