//! `lexiscope`: file-staged pipeline for image-based bilingual lexicon
//! induction. Exit code 2 means bad invocation, 3 means bad data.

mod eval;
mod featurize;
mod io;
mod rank;
mod util;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};

use util::UsageError;

#[derive(Debug, Parser)]
#[command(
    name = "lexiscope",
    version,
    about = "Image-based bilingual lexicon induction"
)]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true, env = "LEXISCOPE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute per-word feature files.
    Featurize(featurize::FeaturizeArgs),
    /// Build a visual-word codebook from image descriptors.
    Codebook(featurize::CodebookArgs),
    /// Rank target translations for every source word.
    Rank(rank::RankArgs),
    /// Train and evaluate the supervised ranker on two folds.
    TrainEval(rank::TrainEvalArgs),
    /// Score ranking files against gold translations.
    Eval(eval::EvalArgs),
    /// Per-word image dispersion.
    Dispersion(eval::DispersionArgs),
    /// Write a synthetic bilingual corpus.
    Synth(io::SynthArgs),
    /// Remove images shared across languages.
    Dedupe(io::DedupeArgs),
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Featurize(a) => featurize::featurize(a),
        Command::Codebook(a) => featurize::codebook(a),
        Command::Rank(a) => rank::rank(a),
        Command::TrainEval(a) => rank::train_eval(a),
        Command::Eval(a) => eval::eval(a),
        Command::Dispersion(a) => eval::dispersion(a),
        Command::Synth(a) => io::synth(a),
        Command::Dedupe(a) => io::dedupe(a),
    }
}

/// Prints the clap error followed by the usage of the subcommand involved.
fn parse_failure(e: clap::Error) -> ExitCode {
    if matches!(
        e.kind(),
        ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
    ) {
        e.exit();
    }
    let _ = e.print();
    let mut cmd = Cli::command();
    cmd.build();
    let usage = std::env::args()
        .skip(1)
        .find_map(|a| cmd.find_subcommand_mut(&a).map(|sub| sub.render_usage()))
        .unwrap_or_else(|| Cli::command().render_usage());
    eprintln!("\n{usage}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => return parse_failure(e),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
