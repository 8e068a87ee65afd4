//! Labeled news datasets: loading, validation, summarizing, and splitting.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary article label. FAKE is the positive class for every downstream
/// metric (precision and recall are reported against it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Label {
    Fake,
    Real,
}

impl Label {
    /// Signed class encoding used by the linear models: FAKE → +1, REAL → −1.
    pub fn signum(self) -> f64 {
        match self {
            Label::Fake => 1.0,
            Label::Real => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Fake => "FAKE",
            Label::Real => "REAL",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Article {
    pub id: String,
    pub title: String,
    pub body: String,
    pub label: Option<Label>,
}

impl Article {
    /// Text fed to the pipeline: title and body concatenated with a single
    /// space, so both contribute features without a separator token.
    pub fn text(&self) -> String {
        if self.title.is_empty() {
            self.body.clone()
        } else if self.body.is_empty() {
            self.title.clone()
        } else {
            format!("{} {}", self.title, self.body)
        }
    }
}

/// An ordered collection of articles with unique, nonempty ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    articles: Vec<Article>,
    source_name: String,
}

impl Corpus {
    pub fn new(articles: Vec<Article>, source_name: impl Into<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for article in &articles {
            if article.id.is_empty() {
                return Err(Error::invalid("article id", "must be nonempty"));
            }
            if !seen.insert(article.id.as_str()) {
                return Err(Error::DuplicateId {
                    id: article.id.clone(),
                });
            }
            if article.title.is_empty() && article.body.is_empty() {
                return Err(Error::invalid(
                    "article",
                    format!("'{}' has neither title nor body", article.id),
                ));
            }
        }
        Ok(Corpus {
            articles,
            source_name: source_name.into(),
        })
    }

    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Article> {
        self.articles.iter()
    }

    /// Per-article labels, erroring on the first unlabeled article.
    pub fn labels(&self) -> Result<Vec<Label>> {
        self.articles
            .iter()
            .map(|a| a.label.ok_or_else(|| Error::Unlabeled { id: a.id.clone() }))
            .collect()
    }
}

/// Column-name mapping for delimiter-separated dataset files.
///
/// `id` and `title` are tolerated as absent from the header (ids are then
/// synthesized as `row-<n>`, titles default to empty); `body` is required.
/// A missing `label` column loads every article unlabeled, which is valid
/// for prediction input but rejected by training and evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSchema {
    pub id: String,
    pub title: String,
    pub body: String,
    pub label: String,
}

impl Default for DatasetSchema {
    fn default() -> Self {
        DatasetSchema {
            id: "id".into(),
            title: "title".into(),
            body: "text".into(),
            label: "label".into(),
        }
    }
}

/// Raw label string → Label mapping. Lookup is exact first, then the
/// lowercased raw value, so one lowercase entry covers case variants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap {
    entries: BTreeMap<String, Label>,
}

impl LabelMap {
    pub fn new(entries: BTreeMap<String, Label>) -> Self {
        LabelMap { entries }
    }

    pub fn get(&self, raw: &str) -> Option<Label> {
        self.entries
            .get(raw)
            .or_else(|| self.entries.get(raw.to_lowercase().as_str()))
            .copied()
    }

    pub fn entries(&self) -> &BTreeMap<String, Label> {
        &self.entries
    }
}

impl Default for LabelMap {
    /// Covers the common public-dataset conventions: the words fake/real and
    /// the 0/1 encoding where 1 marks the unreliable class.
    fn default() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert("fake".into(), Label::Fake);
        entries.insert("real".into(), Label::Real);
        entries.insert("1".into(), Label::Fake);
        entries.insert("0".into(), Label::Real);
        LabelMap::new(entries)
    }
}

/// Bookkeeping from `load_dataset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadStats {
    pub rows_read: usize,
    pub dropped_empty: usize,
}

/// Loads a delimiter-separated dataset with a header row (RFC 4180 quoting).
///
/// Rows whose title and body are both empty are dropped and counted in
/// `LoadStats`. Label values must resolve through `label_map`; an unmapped
/// value is an error naming the value and line.
pub fn load_dataset(
    path: impl AsRef<Path>,
    schema: &DatasetSchema,
    label_map: &LabelMap,
) -> Result<(Corpus, LoadStats)> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;

    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);

    let id_col = find(&schema.id);
    let title_col = find(&schema.title);
    let body_col = find(&schema.body).ok_or_else(|| {
        Error::invalid(
            "schema",
            format!("body column '{}' not found in header", schema.body),
        )
    })?;
    let label_col = find(&schema.label);

    let mut articles = Vec::new();
    let mut stats = LoadStats::default();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        // csv line numbers are 1-based and count the header.
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or(stats.rows_read as u64 + 2);
        stats.rows_read += 1;

        let field = |col: Option<usize>| -> Result<&str> {
            match col {
                None => Ok(""),
                Some(i) => record.get(i).ok_or_else(|| Error::MalformedRow {
                    line,
                    message: format!(
                        "expected at least {} columns, found {}",
                        i + 1,
                        record.len()
                    ),
                }),
            }
        };

        let title = field(title_col)?.to_string();
        let body = field(Some(body_col))?.to_string();
        if title.is_empty() && body.is_empty() {
            stats.dropped_empty += 1;
            continue;
        }

        let id = match id_col {
            Some(i) => {
                let raw = field(Some(i))?;
                if raw.is_empty() {
                    format!("row-{}", stats.rows_read)
                } else {
                    raw.to_string()
                }
            }
            None => format!("row-{}", stats.rows_read),
        };

        let label = match label_col {
            None => None,
            Some(i) => {
                let raw = field(Some(i))?;
                Some(label_map.get(raw).ok_or_else(|| Error::UnmappedLabel {
                    value: raw.to_string(),
                    line,
                })?)
            }
        };

        articles.push(Article {
            id,
            title,
            body,
            label,
        });
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok((Corpus::new(articles, name)?, stats))
}

/// Writes a corpus back out in the default schema (id,title,text,label).
/// Loading the result reproduces the same articles in the same order.
pub fn write_dataset(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(["id", "title", "text", "label"])
        .map_err(|e| csv_error(path, e))?;
    for article in corpus.iter() {
        let label = article
            .label
            .map(|l| l.as_str().to_lowercase())
            .unwrap_or_default();
        writer
            .write_record([
                article.id.as_str(),
                article.title.as_str(),
                article.body.as_str(),
                label.as_str(),
            ])
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(())
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(_) => {
            if let csv::ErrorKind::Io(io) = e.into_kind() {
                Error::Io {
                    path: path.to_path_buf(),
                    source: io,
                }
            } else {
                unreachable!()
            }
        }
        _ => Error::MalformedRow {
            line: e.position().map(|p| p.line()).unwrap_or_default(),
            message: e.to_string(),
        },
    }
}

/// Class histogram over a fully labeled corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDistribution {
    pub fake: usize,
    pub real: usize,
}

impl ClassDistribution {
    pub fn total(&self) -> usize {
        self.fake + self.real
    }

    pub fn get(&self, label: Label) -> usize {
        match label {
            Label::Fake => self.fake,
            Label::Real => self.real,
        }
    }
}

pub fn class_distribution(corpus: &Corpus) -> Result<ClassDistribution> {
    let mut dist = ClassDistribution { fake: 0, real: 0 };
    for article in corpus.iter() {
        match article.label {
            Some(Label::Fake) => dist.fake += 1,
            Some(Label::Real) => dist.real += 1,
            None => {
                return Err(Error::Unlabeled {
                    id: article.id.clone(),
                })
            }
        }
    }
    Ok(dist)
}

/// Train/test split parameters. The split is a pure function of
/// (corpus, spec): the same seed always selects the same membership.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub test_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            test_fraction: 0.2,
            seed: 42,
            stratified: true,
        }
    }
}

/// Splits a labeled corpus into train and test sides.
///
/// |test| = round(test_fraction × |corpus|). Stratified mode shuffles within
/// each class and allocates per-class test counts by largest remainder, so
/// each class's proportion is preserved within ±1 article. Both sides keep
/// the original corpus order.
pub fn split(corpus: &Corpus, spec: &SplitSpec) -> Result<(Corpus, Corpus)> {
    if !(spec.test_fraction > 0.0 && spec.test_fraction < 1.0) {
        return Err(Error::invalid(
            "test_fraction",
            format!("{} is outside (0, 1)", spec.test_fraction),
        ));
    }
    let n = corpus.len();
    let n_test = (spec.test_fraction * n as f64).round() as usize;
    if n_test == 0 || n_test >= n {
        return Err(Error::DegenerateSplit {
            message: format!(
                "fraction {} of {} articles leaves an empty side",
                spec.test_fraction, n
            ),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut test_indices: BTreeSet<usize> = BTreeSet::new();

    if spec.stratified {
        let labels = corpus.labels()?;
        let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (i, label) in labels.iter().enumerate() {
            let c = if *label == Label::Fake { 0 } else { 1 };
            by_class[c].push(i);
        }
        if by_class.iter().any(|c| c.len() < 2) {
            return Err(Error::DegenerateSplit {
                message: "stratified split requires at least 2 articles per class".into(),
            });
        }

        // Largest-remainder allocation of n_test across the two classes.
        let ideals: Vec<f64> = by_class
            .iter()
            .map(|c| spec.test_fraction * c.len() as f64)
            .collect();
        let mut counts: Vec<usize> = ideals.iter().map(|x| x.floor() as usize).collect();
        let mut rest = n_test.saturating_sub(counts.iter().sum());
        let mut order: Vec<usize> = vec![0, 1];
        order.sort_by(|&a, &b| {
            let ra = ideals[a] - ideals[a].floor();
            let rb = ideals[b] - ideals[b].floor();
            rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
        });
        for &c in &order {
            if rest == 0 {
                break;
            }
            counts[c] += 1;
            rest -= 1;
        }
        // Keep every class represented on both sides.
        for c in 0..2 {
            let size = by_class[c].len();
            let other = 1 - c;
            if counts[c] == 0 && counts[other] > 1 {
                counts[c] = 1;
                counts[other] -= 1;
            }
            if counts[c] >= size && counts[other] < by_class[other].len() - 1 {
                counts[c] = size - 1;
                counts[other] += 1;
            }
            if counts[c] == 0 || counts[c] >= size {
                return Err(Error::DegenerateSplit {
                    message: format!(
                        "class {} cannot appear on both sides at fraction {}",
                        if c == 0 { Label::Fake } else { Label::Real },
                        spec.test_fraction
                    ),
                });
            }
        }

        // FAKE is shuffled first so the rng stream is consumed in a fixed order.
        for (c, indices) in by_class.iter_mut().enumerate() {
            indices.shuffle(&mut rng);
            test_indices.extend(indices.iter().take(counts[c]));
        }
    } else {
        let mut indices: Vec<usize> = (0..n).collect();
        indices.shuffle(&mut rng);
        test_indices.extend(indices.into_iter().take(n_test));
    }

    let mut train = Vec::with_capacity(n - n_test);
    let mut test = Vec::with_capacity(n_test);
    for (i, article) in corpus.iter().enumerate() {
        if test_indices.contains(&i) {
            test.push(article.clone());
        } else {
            train.push(article.clone());
        }
    }
    let train = Corpus::new(train, format!("{}-train", corpus.source_name()))?;
    let test = Corpus::new(test, format!("{}-test", corpus.source_name()))?;
    Ok((train, test))
}

/// Renders the class distribution as a small aligned text table.
pub fn format_distribution(dist: &ClassDistribution, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "label  count")?;
    writeln!(out, "FAKE   {}", dist.fake)?;
    writeln!(out, "REAL   {}", dist.real)?;
    writeln!(out, "total  {}", dist.total())
}
