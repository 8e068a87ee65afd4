//! Vocabulary construction, sparse count vectorization, and TF-IDF
//! weighting. TF is a relative frequency (count over document length) and
//! IDF is 1 + ln(N/df), natural log throughout.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::sparse::SparseVector;

/// Term → column mapping with per-term document frequencies.
///
/// Indices are the lexicographic ranks of the retained terms, so the map is
/// dense over 0..len and independent of document order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    terms: Vec<String>,
    document_frequency: Vec<usize>,
    num_documents_fitted: usize,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }

    pub fn document_frequency(&self, index: usize) -> usize {
        self.document_frequency[index]
    }

    pub fn num_documents_fitted(&self) -> usize {
        self.num_documents_fitted
    }

    /// Assembles a vocabulary from already-fitted parts, re-checking the
    /// invariants. `build_vocabulary` is the normal way in.
    pub fn from_fitted(
        terms: Vec<String>,
        document_frequency: Vec<usize>,
        num_documents_fitted: usize,
    ) -> Result<Self> {
        let vocab = Vocabulary {
            terms,
            document_frequency,
            num_documents_fitted,
        };
        vocab.validate()?;
        Ok(vocab)
    }

    /// (index, term, document frequency) in index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &str, usize)> {
        self.terms
            .iter()
            .zip(&self.document_frequency)
            .enumerate()
            .map(|(i, (t, &df))| (i, t.as_str(), df))
    }

    /// Checks the internal invariants; used when loading untrusted bundles.
    pub fn validate(&self) -> Result<()> {
        if self.terms.len() != self.document_frequency.len() {
            return Err(Error::DimensionMismatch {
                expected: self.terms.len(),
                found: self.document_frequency.len(),
            });
        }
        if !self.terms.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("vocabulary", "terms not strictly sorted"));
        }
        for (i, &df) in self.document_frequency.iter().enumerate() {
            if df == 0 || df > self.num_documents_fitted {
                return Err(Error::invalid(
                    "vocabulary",
                    format!(
                        "document frequency {df} of '{}' outside 1..={}",
                        self.terms[i], self.num_documents_fitted
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Builds the vocabulary from tokenized documents.
///
/// Terms seen in fewer than `min_df` documents are pruned. When
/// `max_features` is set, the highest-total-count terms are kept (ties by
/// lexicographic order) before indices are assigned.
pub fn build_vocabulary(
    docs: &[Vec<String>],
    min_df: usize,
    max_features: Option<usize>,
) -> Result<Vocabulary> {
    if min_df == 0 {
        return Err(Error::invalid("min_df", "must be at least 1"));
    }
    if max_features == Some(0) {
        return Err(Error::invalid(
            "max_features",
            "must be at least 1 when set",
        ));
    }

    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    let mut total: BTreeMap<&str, u64> = BTreeMap::new();
    for doc in docs {
        let mut seen = BTreeSet::new();
        for token in doc {
            *total.entry(token.as_str()).or_insert(0) += 1;
            if seen.insert(token.as_str()) {
                *df.entry(token.as_str()).or_insert(0) += 1;
            }
        }
    }

    let mut retained: Vec<&str> = df
        .iter()
        .filter(|&(_, &count)| count >= min_df)
        .map(|(&term, _)| term)
        .collect();

    if let Some(k) = max_features {
        if retained.len() > k {
            retained.sort_by(|a, b| total[b].cmp(&total[a]).then(a.cmp(b)));
            retained.truncate(k);
            retained.sort_unstable();
        }
    }

    if retained.is_empty() {
        return Err(Error::EmptyVocabulary);
    }

    let document_frequency = retained.iter().map(|t| df[t]).collect();
    Ok(Vocabulary {
        terms: retained.into_iter().map(String::from).collect(),
        document_frequency,
        num_documents_fitted: docs.len(),
    })
}

/// Counts vocabulary terms in one token sequence; out-of-vocabulary tokens
/// are ignored.
pub fn count_vectorize(tokens: &[String], vocab: &Vocabulary) -> SparseVector {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for token in tokens {
        if let Some(index) = vocab.index_of(token) {
            *counts.entry(index).or_insert(0.0) += 1.0;
        }
    }
    SparseVector::from_map(counts)
}

/// The m×n sparse counts matrix plus per-document token totals.
/// `doc_lengths` counts all pipeline-surviving tokens, including those the
/// vocabulary later pruned, so TF denominators are stable under pruning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocTermMatrix {
    rows: Vec<SparseVector>,
    num_terms: usize,
    doc_lengths: Vec<usize>,
}

impl DocTermMatrix {
    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_terms(&self) -> usize {
        self.num_terms
    }

    pub fn doc_lengths(&self) -> &[usize] {
        &self.doc_lengths
    }
}

/// Vectorizes every document against the vocabulary.
pub fn vectorize(docs: &[Vec<String>], vocab: &Vocabulary) -> DocTermMatrix {
    DocTermMatrix {
        rows: docs.iter().map(|d| count_vectorize(d, vocab)).collect(),
        num_terms: vocab.len(),
        doc_lengths: docs.iter().map(Vec::len).collect(),
    }
}

/// Per-term inverse document frequencies: idf[t] = 1 + ln(N / df[t]) ≥ 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    idf: Vec<f64>,
    num_documents: usize,
}

impl TfidfModel {
    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn num_documents(&self) -> usize {
        self.num_documents
    }

    pub fn num_terms(&self) -> usize {
        self.idf.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.idf.iter().any(|v| !v.is_finite() || *v < 1.0) {
            return Err(Error::invalid("tfidf", "idf values must be finite and ≥ 1"));
        }
        Ok(())
    }
}

/// Fits IDF weights from the vocabulary's document frequencies.
pub fn fit_idf(matrix: &DocTermMatrix, vocab: &Vocabulary) -> Result<TfidfModel> {
    if matrix.num_terms() != vocab.len() {
        return Err(Error::DimensionMismatch {
            expected: vocab.len(),
            found: matrix.num_terms(),
        });
    }
    let n = vocab.num_documents_fitted();
    let idf = (0..vocab.len())
        .map(|t| 1.0 + (n as f64 / vocab.document_frequency(t) as f64).ln())
        .collect();
    Ok(TfidfModel {
        idf,
        num_documents: n,
    })
}

/// Reweights one count vector: value(t) = (count_t / doc_length) × idf[t].
/// The sparsity pattern is preserved exactly.
pub fn tfidf_transform(
    counts: &SparseVector,
    doc_length: usize,
    model: &TfidfModel,
) -> Result<SparseVector> {
    if counts.is_empty() {
        return Ok(SparseVector::empty());
    }
    if doc_length == 0 {
        return Err(Error::invalid(
            "doc_length",
            "zero length with nonempty counts",
        ));
    }
    let total = counts.sum();
    if total > doc_length as f64 {
        return Err(Error::invalid(
            "doc_length",
            format!("{doc_length} is smaller than the total count {total}"),
        ));
    }
    if let Some(max) = counts.max_index() {
        if max >= model.num_terms() {
            return Err(Error::DimensionMismatch {
                expected: model.num_terms(),
                found: max + 1,
            });
        }
    }
    let len = doc_length as f64;
    Ok(counts.map_values(|t, count| (count / len) * model.idf[t]))
}

/// Unit-norm scaling; the zero vector passes through.
pub fn l2_normalize(v: &SparseVector) -> SparseVector {
    v.l2_normalized()
}

/// How count rows are converted to classifier features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Counts,
    Tfidf,
}

impl Representation {
    pub fn as_str(self) -> &'static str {
        match self {
            Representation::Counts => "counts",
            Representation::Tfidf => "tfidf",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub representation: Representation,
    pub l2_normalize: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            representation: Representation::Tfidf,
            l2_normalize: true,
        }
    }
}

/// Classifier input: one feature row per document.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub rows: Vec<SparseVector>,
    pub num_terms: usize,
}

/// Applies the configured representation to a counts matrix.
pub fn featurize(
    matrix: &DocTermMatrix,
    tfidf: Option<&TfidfModel>,
    config: &FeatureConfig,
) -> Result<FeatureMatrix> {
    let mut rows = Vec::with_capacity(matrix.num_rows());
    for (row, &len) in matrix.rows().iter().zip(matrix.doc_lengths()) {
        rows.push(featurize_row(row, len, tfidf, config)?);
    }
    Ok(FeatureMatrix {
        rows,
        num_terms: matrix.num_terms(),
    })
}

/// Applies the configured representation to a single counts row.
pub fn featurize_row(
    counts: &SparseVector,
    doc_length: usize,
    tfidf: Option<&TfidfModel>,
    config: &FeatureConfig,
) -> Result<SparseVector> {
    let mut row = match config.representation {
        Representation::Counts => counts.clone(),
        Representation::Tfidf => {
            let model = tfidf.ok_or_else(|| {
                Error::invalid("features", "tfidf representation requires a fitted model")
            })?;
            tfidf_transform(counts, doc_length, model)?
        }
    };
    if config.l2_normalize {
        row = row.l2_normalized();
    }
    Ok(row)
}

/// A term with its total occurrence count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermCount {
    pub term: String,
    pub count: u64,
}

/// The k highest-count terms over the whole matrix, ties broken
/// lexicographically. k beyond the vocabulary returns the full ranking.
pub fn top_terms(matrix: &DocTermMatrix, vocab: &Vocabulary, k: usize) -> Vec<TermCount> {
    let mut totals = vec![0.0f64; vocab.len()];
    for row in matrix.rows() {
        for (t, count) in row.iter() {
            totals[t] += count;
        }
    }
    rank(&totals, vocab, k)
}

/// Per-class top terms; `labels` must parallel the matrix rows.
pub fn top_terms_per_class(
    matrix: &DocTermMatrix,
    vocab: &Vocabulary,
    labels: &[Label],
    k: usize,
) -> Result<BTreeMap<Label, Vec<TermCount>>> {
    if labels.len() != matrix.num_rows() {
        return Err(Error::LengthMismatch {
            left: matrix.num_rows(),
            right: labels.len(),
        });
    }
    let mut totals: BTreeMap<Label, Vec<f64>> = BTreeMap::new();
    for (row, &label) in matrix.rows().iter().zip(labels) {
        let class_totals = totals
            .entry(label)
            .or_insert_with(|| vec![0.0f64; vocab.len()]);
        for (t, count) in row.iter() {
            class_totals[t] += count;
        }
    }
    Ok(totals
        .into_iter()
        .map(|(label, class_totals)| (label, rank(&class_totals, vocab, k)))
        .collect())
}

fn rank(totals: &[f64], vocab: &Vocabulary, k: usize) -> Vec<TermCount> {
    let mut order: Vec<usize> = (0..totals.len()).filter(|&t| totals[t] > 0.0).collect();
    order.sort_by(|&a, &b| {
        totals[b]
            .partial_cmp(&totals[a])
            .unwrap()
            .then_with(|| vocab.term(a).cmp(vocab.term(b)))
    });
    order.truncate(k);
    order
        .into_iter()
        .map(|t| TermCount {
            term: vocab.term(t).to_string(),
            count: totals[t] as u64,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(raw: &[&[&str]]) -> Vec<Vec<String>> {
        raw.iter()
            .map(|d| d.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn min_df_prunes_rare_terms() {
        let docs = docs(&[&["a", "b"], &["b", "c"], &["b"]]);
        let vocab = build_vocabulary(&docs, 2, None).unwrap();
        assert_eq!(vocab.len(), 1);
        assert_eq!(vocab.term(0), "b");
        assert_eq!(vocab.document_frequency(0), 3);
    }

    #[test]
    fn min_df_one_keeps_everything() {
        let docs = docs(&[&["a", "b"], &["b", "c"], &["b"]]);
        let vocab = build_vocabulary(&docs, 1, None).unwrap();
        assert_eq!(vocab.len(), 3);
        assert_eq!(
            (0..3).map(|i| vocab.term(i)).collect::<Vec<_>>(),
            ["a", "b", "c"]
        );
    }

    #[test]
    fn min_df_above_corpus_size_is_empty() {
        let docs = docs(&[&["a"], &["b"]]);
        assert!(matches!(
            build_vocabulary(&docs, 3, None),
            Err(Error::EmptyVocabulary)
        ));
    }

    #[test]
    fn max_features_keeps_highest_totals_with_lexicographic_ties() {
        // totals: a=3, b=2, c=2, d=1 → top 2 are a and b (b beats c on the tie).
        let docs = docs(&[&["a", "a", "b"], &["a", "b", "c"], &["c", "d"]]);
        let vocab = build_vocabulary(&docs, 1, Some(2)).unwrap();
        assert_eq!(
            (0..2).map(|i| vocab.term(i)).collect::<Vec<_>>(),
            ["a", "b"]
        );
    }

    #[test]
    fn count_vectorize_counts_and_ignores_oov() {
        let docs = docs(&[&["fake", "news"], &["news", "real"]]);
        let vocab = build_vocabulary(&docs, 1, None).unwrap();
        let tokens: Vec<String> = ["fake", "news", "fake", "unseen"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let v = count_vectorize(&tokens, &vocab);
        assert_eq!(v.value(vocab.index_of("fake").unwrap()), 2.0);
        assert_eq!(v.value(vocab.index_of("news").unwrap()), 1.0);
        assert_eq!(v.nnz(), 2);
    }

    #[test]
    fn idf_of_universal_term_is_one() {
        let docs = docs(&[&["x", "y"], &["x"]]);
        let vocab = build_vocabulary(&docs, 1, None).unwrap();
        let matrix = vectorize(&docs, &vocab);
        let model = fit_idf(&matrix, &vocab).unwrap();
        let x = vocab.index_of("x").unwrap();
        assert!((model.idf()[x] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn universal_term_tfidf_is_inverse_doc_length() {
        let docs = docs(&[&["x", "y", "z", "w"], &["x"]]);
        let vocab = build_vocabulary(&docs, 1, None).unwrap();
        let matrix = vectorize(&docs, &vocab);
        let model = fit_idf(&matrix, &vocab).unwrap();
        let weighted = tfidf_transform(&matrix.rows()[0], 4, &model).unwrap();
        let x = vocab.index_of("x").unwrap();
        assert!((weighted.value(x) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn top_terms_ranks_with_lexicographic_ties() {
        let docs = docs(&[&["fake", "fake", "news"], &["news"]]);
        let vocab = build_vocabulary(&docs, 1, None).unwrap();
        let matrix = vectorize(&docs, &vocab);
        let top = top_terms(&matrix, &vocab, 2);
        assert_eq!(top.len(), 2);
        assert_eq!((top[0].term.as_str(), top[0].count), ("fake", 2));
        assert_eq!((top[1].term.as_str(), top[1].count), ("news", 2));
    }

    #[test]
    fn vocabulary_round_trips_through_serde() {
        let docs = docs(&[&["a", "b"], &["b", "c"]]);
        let vocab = build_vocabulary(&docs, 1, None).unwrap();
        let json = serde_json::to_string(&vocab).unwrap();
        let back: Vocabulary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vocab);
    }
}
