//! veridict: train, evaluate, and compare fake-news classifiers from the
//! command line. Exit codes: 0 success, 1 usage error, 2 data or model
//! error, 3 baseline failure under --enforce-baseline.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use config::{FeatureArgs, PipelineArgs, SchemaArgs, TrainArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config, or empty input: exit 1.
    Usage(String),
    /// Anything wrong with datasets, bundles, or training: exit 2.
    Data(veridict_core::Error),
    /// Accuracy below the 0.50 baseline with --enforce-baseline: exit 3.
    Baseline {
        accuracy: f64,
    },
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io(_) => 2,
            CliError::Baseline { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(message) => write!(f, "{message}"),
            CliError::Data(err) => write!(f, "{err}"),
            CliError::Baseline { accuracy } => {
                write!(f, "accuracy {accuracy:.4} is below the 0.50 baseline")
            }
            CliError::Io(err) => write!(f, "{err}"),
        }
    }
}

impl From<veridict_core::Error> for CliError {
    fn from(err: veridict_core::Error) -> Self {
        CliError::Data(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "veridict",
    version,
    about = "Fake-news classification: preprocessing, tf-idf features, four classifiers"
)]
pub struct Cli {
    /// TOML config file; flags override its values
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Emit machine-readable JSON instead of text tables
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

// Train carries many flags; boxing them buys nothing for a short-lived CLI.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class distribution of a labeled dataset
    Stats {
        /// Dataset CSV
        #[arg(long, value_name = "PATH")]
        data: PathBuf,
        #[command(flatten)]
        schema: SchemaArgs,
    },
    /// Train a classifier and save a model bundle
    Train {
        /// Training dataset CSV
        #[arg(long, value_name = "PATH")]
        data: PathBuf,
        /// Classifier: nb, svm, pa, or lr
        #[arg(long, value_name = "KIND")]
        model: String,
        /// Where to write the bundle
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        /// Hold out this fraction for evaluation after training
        #[arg(long, value_name = "F")]
        test_fraction: Option<f64>,
        /// Fail (exit 3) if holdout accuracy is below 0.50
        #[arg(long)]
        enforce_baseline: bool,
        /// Dataset name recorded in the bundle (defaults to the file stem)
        #[arg(long, value_name = "NAME")]
        dataset_name: Option<String>,
        /// Creation timestamp recorded in the bundle (RFC 3339); defaults to now
        #[arg(long, value_name = "TS")]
        timestamp: Option<String>,
        #[command(flatten)]
        schema: SchemaArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[command(flatten)]
        features: FeatureArgs,
        #[command(flatten)]
        train: TrainArgs,
    },
    /// Evaluate a bundle against a labeled dataset
    Evaluate {
        /// Model bundle file
        #[arg(long, value_name = "PATH")]
        bundle: PathBuf,
        /// Test dataset CSV
        #[arg(long, value_name = "PATH")]
        data: PathBuf,
        /// Fail (exit 3) if accuracy is below 0.50
        #[arg(long)]
        enforce_baseline: bool,
        /// Write the report here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        schema: SchemaArgs,
    },
    /// Predict labels for raw text (--text, --data, or stdin lines)
    Predict {
        /// Model bundle file
        #[arg(long, value_name = "PATH")]
        bundle: PathBuf,
        /// Single text to classify
        #[arg(long, value_name = "TEXT", conflicts_with = "data")]
        text: Option<String>,
        /// Dataset CSV to classify (labels optional)
        #[arg(long, value_name = "PATH")]
        data: Option<PathBuf>,
        #[command(flatten)]
        schema: SchemaArgs,
    },
    /// Pairwise accuracy comparison of two or more bundles
    Compare {
        /// Bundle files to compare
        #[arg(value_name = "BUNDLE", num_args = 2..)]
        bundles: Vec<PathBuf>,
        /// Test dataset CSV
        #[arg(long, value_name = "PATH")]
        data: PathBuf,
        /// Write the grid here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        schema: SchemaArgs,
    },
    /// Highest-count terms after preprocessing, overall or per class
    TopTerms {
        /// Dataset CSV
        #[arg(long, value_name = "PATH")]
        data: PathBuf,
        /// How many terms to list
        #[arg(long, value_name = "N", default_value_t = 20)]
        k: usize,
        /// Break the counts down by class (needs labels)
        #[arg(long)]
        per_class: bool,
        #[command(flatten)]
        schema: SchemaArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[command(flatten)]
        features: FeatureArgs,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{err}");
            std::process::exit(0);
        }
        Err(err) => {
            eprint!("{err}");
            std::process::exit(1);
        }
    };
    match commands::run(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
