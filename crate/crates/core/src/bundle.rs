//! Versioned on-disk model bundles. One JSON file carries everything needed
//! to reproduce a prediction: pipeline config, the resolved stopword list,
//! vocabulary, optional idf weights, the classifier, and provenance. A
//! sha256 checksum over the canonical payload encoding catches corruption
//! and hand edits at load time.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifiers::{ClassifierModel, Prediction, TrainConfig};
use crate::error::{Error, Result};
use crate::features::{
    count_vectorize, featurize_row, FeatureConfig, Representation, TfidfModel, Vocabulary,
};
use crate::preprocess::{PipelineConfig, Preprocessor, StopwordList};

pub const BUNDLE_FORMAT_VERSION: u32 = 1;

/// Where a model came from: enough to rerun the training command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub dataset_name: String,
    pub seed: u64,
    pub train_config: TrainConfig,
    /// RFC 3339; callers may pin it to make bundle files byte-reproducible.
    pub created_at: String,
}

/// The checksummed region of a bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundlePayload {
    pub pipeline: PipelineConfig,
    /// Resolved stopword list, embedded so predictions never depend on the
    /// host's built-ins matching the trainer's. None iff stopwords are off.
    pub stopwords: Option<Vec<String>>,
    pub feature_config: FeatureConfig,
    pub vocabulary: Vocabulary,
    pub tfidf: Option<TfidfModel>,
    pub classifier: ClassifierModel,
    pub provenance: Provenance,
}

impl BundlePayload {
    pub fn validate(&self) -> Result<()> {
        self.vocabulary.validate()?;
        self.classifier.validate()?;
        let num_terms = self.vocabulary.len();
        if self.classifier.num_terms() != num_terms {
            return Err(Error::DimensionMismatch {
                expected: num_terms,
                found: self.classifier.num_terms(),
            });
        }
        if let Some(tfidf) = &self.tfidf {
            tfidf.validate()?;
            if tfidf.num_terms() != num_terms {
                return Err(Error::DimensionMismatch {
                    expected: num_terms,
                    found: tfidf.num_terms(),
                });
            }
        } else if self.feature_config.representation == Representation::Tfidf {
            return Err(Error::Bundle(
                "tfidf representation without fitted idf weights".to_string(),
            ));
        }
        if self.pipeline.stopwords_enabled && self.stopwords.is_none() {
            return Err(Error::Bundle(
                "stopword removal enabled but no list embedded".to_string(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    format_version: u32,
    checksum: String,
    payload: BundlePayload,
}

/// Diagnostics for a single text prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionDiagnostics {
    /// Pipeline-surviving tokens found in the vocabulary, in text order.
    pub retained_tokens: Vec<String>,
    pub oov_count: usize,
    /// True when nothing survived preprocessing and the model fell back to
    /// its prior (NB) or bias (linear) decision.
    pub used_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextPrediction {
    pub prediction: Prediction,
    pub diagnostics: PredictionDiagnostics,
}

/// Canonical encoding the checksum is computed over: JSON with
/// lexicographically sorted object keys and shortest-roundtrip numbers.
fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value)
        .map_err(|e| Error::Bundle(format!("cannot encode payload: {e}")))?;
    serde_json::to_string(&value).map_err(|e| Error::Bundle(format!("cannot encode payload: {e}")))
}

fn sha256_hex(data: &str) -> String {
    let digest = Sha256::digest(data.as_bytes());
    let mut out = String::with_capacity(digest.len() * 2 + 7);
    out.push_str("sha256:");
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

impl ModelBundle {
    /// Validates the payload and seals it under a fresh checksum.
    pub fn new(payload: BundlePayload) -> Result<Self> {
        payload.validate()?;
        let checksum = sha256_hex(&canonical_json(&payload)?);
        Ok(ModelBundle {
            format_version: BUNDLE_FORMAT_VERSION,
            checksum,
            payload,
        })
    }

    pub fn format_version(&self) -> u32 {
        self.format_version
    }

    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    pub fn payload(&self) -> &BundlePayload {
        &self.payload
    }

    /// Writes the bundle as pretty-printed JSON, atomically: the bytes land
    /// in a temp file in the target directory first, then rename over.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let io_err = |source: std::io::Error| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Bundle(format!("cannot encode bundle: {e}")))?;
        text.push('\n');
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
        tmp.write_all(text.as_bytes()).map_err(io_err)?;
        tmp.persist(path).map_err(|e| io_err(e.error))?;
        Ok(())
    }

    /// Loads and fully verifies a bundle: format version, checksum over the
    /// canonical payload bytes, then structural validation.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let raw: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Error::Bundle(format!("not a bundle file: {e}")))?;
        let format_version = raw
            .get("format_version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Bundle("missing format_version".to_string()))?;
        if format_version != u64::from(BUNDLE_FORMAT_VERSION) {
            return Err(Error::BundleVersion {
                found: format_version,
                supported: u64::from(BUNDLE_FORMAT_VERSION),
            });
        }
        let stored = raw
            .get("checksum")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Bundle("missing checksum".to_string()))?
            .to_string();
        let payload_value = raw
            .get("payload")
            .ok_or_else(|| Error::Bundle("missing payload".to_string()))?;
        let computed = sha256_hex(&canonical_json(payload_value)?);
        if stored != computed {
            return Err(Error::BundleChecksum { stored, computed });
        }
        let payload: BundlePayload = serde_json::from_value(payload_value.clone())
            .map_err(|e| Error::Bundle(format!("malformed payload: {e}")))?;
        payload.validate()?;
        Ok(ModelBundle {
            format_version: BUNDLE_FORMAT_VERSION,
            checksum: stored,
            payload,
        })
    }

    /// Rebuilds the preprocessor from the embedded stopword list, never from
    /// host built-ins.
    pub fn preprocessor(&self) -> Preprocessor {
        match &self.payload.stopwords {
            Some(words) => Preprocessor::with_stopwords(
                self.payload.pipeline.clone(),
                StopwordList::from_words(&self.payload.pipeline.stopword_list_id, words),
            ),
            None => {
                let mut config = self.payload.pipeline.clone();
                config.stopwords_enabled = false;
                Preprocessor::with_stopwords(
                    config,
                    StopwordList::from_words("none", Vec::<String>::new()),
                )
            }
        }
    }

    /// Full pipeline on one raw text: preprocess, vectorize, featurize,
    /// predict. Texts that lose every token to preprocessing still get a
    /// label (prior/bias fallback) with `used_fallback` set.
    pub fn predict_text(&self, text: &str) -> Result<TextPrediction> {
        let tokens = self.preprocessor().run(text);
        let vocabulary = &self.payload.vocabulary;
        let mut retained_tokens = Vec::new();
        let mut oov_count = 0usize;
        for token in &tokens {
            if vocabulary.index_of(token).is_some() {
                retained_tokens.push(token.clone());
            } else {
                oov_count += 1;
            }
        }
        let counts = count_vectorize(&tokens, vocabulary);
        let features = featurize_row(
            &counts,
            tokens.len(),
            self.payload.tfidf.as_ref(),
            &self.payload.feature_config,
        )?;
        let prediction = self.payload.classifier.predict(&features);
        Ok(TextPrediction {
            prediction,
            diagnostics: PredictionDiagnostics {
                retained_tokens,
                oov_count,
                used_fallback: tokens.is_empty(),
            },
        })
    }
}
