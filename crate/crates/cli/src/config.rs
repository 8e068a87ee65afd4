//! Optional TOML config file. Precedence everywhere is: command-line flag,
//! then config file value, then built-in default; the resolved configs are
//! echoed into trained bundles via their payload.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use veridict_core::{FeatureConfig, PipelineConfig, Representation, TrainConfig};

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub pipeline: PipelineSection,
    #[serde(default)]
    pub features: FeatureSection,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub data: DataSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineSection {
    pub lowercase: Option<bool>,
    pub stopwords: Option<bool>,
    pub stopword_list: Option<String>,
    pub stopword_file: Option<PathBuf>,
    pub stemming: Option<bool>,
    pub min_token_length: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureSection {
    pub representation: Option<String>,
    pub l2_normalize: Option<bool>,
    pub min_df: Option<usize>,
    pub max_features: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainSection {
    pub model: Option<String>,
    pub epochs: Option<usize>,
    pub seed: Option<u64>,
    pub shuffle_each_epoch: Option<bool>,
    pub alpha: Option<f64>,
    pub aggressiveness: Option<f64>,
    pub regularization: Option<f64>,
    pub learning_rate: Option<f64>,
    pub test_fraction: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub id_column: Option<String>,
    pub title_column: Option<String>,
    pub text_column: Option<String>,
    pub label_column: Option<String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

pub fn parse_representation(value: &str) -> Result<Representation, CliError> {
    match value {
        "tfidf" => Ok(Representation::Tfidf),
        "counts" => Ok(Representation::Counts),
        other => Err(CliError::Usage(format!(
            "unknown feature representation '{other}' (expected tfidf or counts)"
        ))),
    }
}

/// Pipeline flags shared by train and top-terms.
#[derive(Debug, clap::Args)]
pub struct PipelineArgs {
    /// Keep original letter case (lowercasing is on by default)
    #[arg(long)]
    pub no_lowercase: bool,
    /// Skip stopword removal
    #[arg(long)]
    pub no_stopwords: bool,
    /// Skip Porter stemming
    #[arg(long)]
    pub no_stemming: bool,
    /// Drop tokens shorter than this many characters
    #[arg(long, value_name = "N")]
    pub min_token_length: Option<usize>,
    /// Newline-delimited stopword file replacing the built-in list
    #[arg(long, value_name = "PATH")]
    pub stopword_file: Option<PathBuf>,
}

impl PipelineArgs {
    pub fn resolve(&self, file: &PipelineSection) -> (PipelineConfig, Option<PathBuf>) {
        let defaults = PipelineConfig::default();
        let config = PipelineConfig {
            lowercase: if self.no_lowercase {
                false
            } else {
                file.lowercase.unwrap_or(defaults.lowercase)
            },
            stopwords_enabled: if self.no_stopwords {
                false
            } else {
                file.stopwords.unwrap_or(defaults.stopwords_enabled)
            },
            stopword_list_id: file
                .stopword_list
                .clone()
                .unwrap_or(defaults.stopword_list_id),
            stemming_enabled: if self.no_stemming {
                false
            } else {
                file.stemming.unwrap_or(defaults.stemming_enabled)
            },
            min_token_length: self
                .min_token_length
                .or(file.min_token_length)
                .unwrap_or(defaults.min_token_length),
        };
        let stopword_file = self
            .stopword_file
            .clone()
            .or_else(|| file.stopword_file.clone());
        (config, stopword_file)
    }
}

/// Feature flags shared by train and top-terms.
#[derive(Debug, clap::Args)]
pub struct FeatureArgs {
    /// Feature representation: tfidf or counts
    #[arg(long, value_name = "REPR")]
    pub features: Option<String>,
    /// Skip L2 normalization of feature rows
    #[arg(long)]
    pub no_normalize: bool,
    /// Prune terms appearing in fewer than this many documents
    #[arg(long, value_name = "N")]
    pub min_df: Option<usize>,
    /// Keep only the highest-count terms
    #[arg(long, value_name = "N")]
    pub max_features: Option<usize>,
}

impl FeatureArgs {
    pub fn resolve(
        &self,
        file: &FeatureSection,
    ) -> Result<(FeatureConfig, usize, Option<usize>), CliError> {
        let defaults = FeatureConfig::default();
        let representation = match &self.features {
            Some(v) => parse_representation(v)?,
            None => match &file.representation {
                Some(v) => parse_representation(v)?,
                None => defaults.representation,
            },
        };
        let l2_normalize = if self.no_normalize {
            false
        } else {
            file.l2_normalize.unwrap_or(defaults.l2_normalize)
        };
        let min_df = self.min_df.or(file.min_df).unwrap_or(1);
        let max_features = self.max_features.or(file.max_features);
        Ok((
            FeatureConfig {
                representation,
                l2_normalize,
            },
            min_df,
            max_features,
        ))
    }
}

/// Dataset column mapping flags shared by every data-reading subcommand.
#[derive(Debug, clap::Args)]
pub struct SchemaArgs {
    /// Column holding the article id
    #[arg(long, value_name = "NAME")]
    pub id_column: Option<String>,
    /// Column holding the title
    #[arg(long, value_name = "NAME")]
    pub title_column: Option<String>,
    /// Column holding the article body
    #[arg(long, value_name = "NAME")]
    pub text_column: Option<String>,
    /// Column holding the label
    #[arg(long, value_name = "NAME")]
    pub label_column: Option<String>,
}

impl SchemaArgs {
    pub fn resolve(&self, file: &DataSection) -> veridict_core::DatasetSchema {
        let defaults = veridict_core::DatasetSchema::default();
        veridict_core::DatasetSchema {
            id: self
                .id_column
                .clone()
                .or_else(|| file.id_column.clone())
                .unwrap_or(defaults.id),
            title: self
                .title_column
                .clone()
                .or_else(|| file.title_column.clone())
                .unwrap_or(defaults.title),
            body: self
                .text_column
                .clone()
                .or_else(|| file.text_column.clone())
                .unwrap_or(defaults.body),
            label: self
                .label_column
                .clone()
                .or_else(|| file.label_column.clone())
                .unwrap_or(defaults.label),
        }
    }
}

/// Trainer hyperparameter flags.
#[derive(Debug, clap::Args)]
pub struct TrainArgs {
    /// Shuffle seed for splitting and epoch ordering
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Training epochs for the linear models
    #[arg(long, value_name = "N")]
    pub epochs: Option<usize>,
    /// Visit examples in a fixed order instead of reshuffling per epoch
    #[arg(long)]
    pub no_shuffle: bool,
    /// Naive Bayes smoothing strength
    #[arg(long, value_name = "F")]
    pub alpha: Option<f64>,
    /// PA aggressiveness cap C
    #[arg(long, value_name = "F")]
    pub aggressiveness: Option<f64>,
    /// SVM regularization strength lambda
    #[arg(long, value_name = "F")]
    pub regularization: Option<f64>,
    /// LR initial learning rate
    #[arg(long, value_name = "F")]
    pub learning_rate: Option<f64>,
}

impl TrainArgs {
    pub fn resolve(&self, file: &TrainSection) -> (TrainConfig, f64) {
        let defaults = TrainConfig::default();
        let config = TrainConfig {
            epochs: self.epochs.or(file.epochs).unwrap_or(defaults.epochs),
            seed: self.seed.or(file.seed).unwrap_or(defaults.seed),
            shuffle_each_epoch: if self.no_shuffle {
                false
            } else {
                file.shuffle_each_epoch
                    .unwrap_or(defaults.shuffle_each_epoch)
            },
            aggressiveness: self
                .aggressiveness
                .or(file.aggressiveness)
                .unwrap_or(defaults.aggressiveness),
            regularization: self
                .regularization
                .or(file.regularization)
                .unwrap_or(defaults.regularization),
            learning_rate: self
                .learning_rate
                .or(file.learning_rate)
                .unwrap_or(defaults.learning_rate),
        };
        let alpha = self.alpha.or(file.alpha).unwrap_or(1.0);
        (config, alpha)
    }
}
