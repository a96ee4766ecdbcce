//! `proteus`: fit regime models, schedule drifts, simulate streams, build
//! features and analyze the result.

mod analyze;
mod args;
mod fit;
mod generate;
mod output;

use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "proteus", version, about = "Semi-synthetic financial streams with known concept drifts")]
struct Cli {
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit an ARMA-GARCH model to a bar file by AIC grid search.
    Fit(fit::FitArgs),
    /// Generate a random transition map.
    GenMap(generate::GenMapArgs),
    /// Simulate streams from fitted models following a transition map.
    Simulate(generate::SimulateArgs),
    /// Reconstruct prices from a stream and compute indicator features.
    Featurize(generate::FeaturizeArgs),
    /// Descriptive statistics, histograms, state embedding and k-means.
    Analyze(analyze::AnalyzeArgs),
    /// Re-hash every file listed in a manifest.
    Verify(output::VerifyArgs),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        anyhow::ensure!(n > 0, "--threads must be at least 1");
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("building thread pool")?;
    pool.install(|| match cli.command {
        Command::Fit(a) => fit::run(a),
        Command::GenMap(a) => generate::gen_map(a),
        Command::Simulate(a) => generate::simulate(a),
        Command::Featurize(a) => generate::featurize(a),
        Command::Analyze(a) => analyze::run(a),
        Command::Verify(a) => output::verify(a),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
