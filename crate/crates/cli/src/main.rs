mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Query, SynthOverrides};
use config::{CommonArgs, Settings};

#[derive(Parser)]
#[command(name = "linguafraud", version, about = "Explainable fraud screening for call transcripts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the feature matrix of a corpus as CSV
    Extract {
        /// Corpus directory or manifest file
        corpus: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Cross-validate classifiers and write a report plus fitted models
    Evaluate {
        /// Corpus directory, manifest, or feature matrix (.csv)
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Show what a saved model learned, optionally for one call
    Explain {
        model: PathBuf,
        /// Transcript to explain the prediction for
        #[arg(long, value_name = "PATH")]
        transcript: Option<PathBuf>,
        /// Feature matrix holding the query row
        #[arg(long, value_name = "PATH")]
        matrix: Option<PathBuf>,
        /// Row id within --matrix
        #[arg(long, value_name = "ID")]
        row: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Classify one transcript with a saved model
    Predict {
        model: PathBuf,
        transcript: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Generate a synthetic labelled corpus
    Synth {
        /// How far apart the classes are, 0 for no signal
        #[arg(long)]
        signal: Option<f64>,
        #[arg(long)]
        n_fraud: Option<usize>,
        #[arg(long)]
        n_non_fraud: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn run(cli: Cli) -> linguafraud::Result<()> {
    match cli.command {
        Command::Extract { corpus, common } => commands::extract(&corpus, &Settings::resolve(&common)?),
        Command::Evaluate { input, common } => commands::evaluate(&input, &Settings::resolve(&common)?),
        Command::Explain {
            model,
            transcript,
            matrix,
            row,
            common,
        } => {
            let query = Query {
                transcript: transcript.as_deref(),
                matrix: matrix.as_deref(),
                row: row.as_deref(),
            };
            commands::explain(&model, query, &Settings::resolve(&common)?)
        }
        Command::Predict {
            model,
            transcript,
            common,
        } => commands::predict(&model, &transcript, &Settings::resolve(&common)?),
        Command::Synth {
            signal,
            n_fraud,
            n_non_fraud,
            common,
        } => commands::synth(
            &Settings::resolve(&common)?,
            SynthOverrides {
                signal,
                n_fraud,
                n_non_fraud,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
