//! Text normalization: tokenization, stopword removal, and stemming.
//!
//! The stage order is fixed: tokenize → remove stopwords → stem → drop
//! short tokens. Stopword membership is decided before stemming so a stem
//! can never re-match a stopword.

mod porter;

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use porter::porter_stem;

/// Identifier of the built-in pinned English stopword list.
pub const ENGLISH_STOPWORDS_ID: &str = "english";

const ENGLISH_STOPWORDS: &str = include_str!("../../data/stopwords/english.txt");

/// Pipeline switches. Serialized into every model bundle so prediction
/// replays exactly the training-time normalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub lowercase: bool,
    pub stopwords_enabled: bool,
    pub stopword_list_id: String,
    pub stemming_enabled: bool,
    pub min_token_length: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            lowercase: true,
            stopwords_enabled: true,
            stopword_list_id: ENGLISH_STOPWORDS_ID.into(),
            stemming_enabled: true,
            min_token_length: 2,
        }
    }
}

/// Splits text into maximal runs of alphanumeric characters; every other
/// character separates. Lowercasing is Unicode-aware.
pub fn tokenize(text: &str, lowercase: bool) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            if lowercase {
                current.extend(ch.to_lowercase());
            } else {
                current.push(ch);
            }
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// A named set of words to drop before feature extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordList {
    id: String,
    words: BTreeSet<String>,
}

impl StopwordList {
    /// Resolves a built-in list by id. The only built-in is "english",
    /// a pinned standard list of 318 words.
    pub fn builtin(id: &str) -> Result<Self> {
        if id == ENGLISH_STOPWORDS_ID {
            Ok(Self::from_words(id, ENGLISH_STOPWORDS.lines()))
        } else {
            Err(Error::UnknownStopwordList { id: id.into() })
        }
    }

    /// Reads a newline-delimited UTF-8 word file; blank lines are skipped.
    pub fn from_file(id: &str, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Ok(Self::from_words(id, text.lines()))
    }

    pub fn from_words<S: AsRef<str>>(id: &str, words: impl IntoIterator<Item = S>) -> Self {
        StopwordList {
            id: id.into(),
            words: words
                .into_iter()
                .map(|w| w.as_ref().trim().to_string())
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Words in sorted order, for embedding into a bundle.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(|s| s.as_str())
    }
}

/// Drops every token present in the list, preserving order.
pub fn remove_stopwords(tokens: Vec<String>, list: &StopwordList) -> Vec<String> {
    tokens.into_iter().filter(|t| !list.contains(t)).collect()
}

/// A resolved pipeline: config plus its stopword list, built once and
/// reused across documents. Stateless after construction.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    config: PipelineConfig,
    stopwords: Option<StopwordList>,
}

impl Preprocessor {
    /// Resolves the config's stopword list id against the built-ins.
    pub fn new(config: PipelineConfig) -> Result<Self> {
        let stopwords = if config.stopwords_enabled {
            Some(StopwordList::builtin(&config.stopword_list_id)?)
        } else {
            None
        };
        Ok(Preprocessor { config, stopwords })
    }

    /// Uses a caller-supplied list (user file or bundle-embedded words)
    /// instead of resolving a built-in.
    pub fn with_stopwords(config: PipelineConfig, list: StopwordList) -> Self {
        let stopwords = config.stopwords_enabled.then_some(list);
        Preprocessor { config, stopwords }
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn stopwords(&self) -> Option<&StopwordList> {
        self.stopwords.as_ref()
    }

    /// Runs the full pipeline over one document.
    pub fn run(&self, text: &str) -> Vec<String> {
        let mut tokens = tokenize(text, self.config.lowercase);
        if let Some(list) = &self.stopwords {
            tokens = remove_stopwords(tokens, list);
        }
        if self.config.stemming_enabled {
            for token in &mut tokens {
                *token = porter_stem(token);
            }
        }
        if self.config.min_token_length > 1 {
            let min = self.config.min_token_length;
            tokens.retain(|t| t.chars().count() >= min);
        }
        tokens
    }
}
