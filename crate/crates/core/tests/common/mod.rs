//! Shared helpers for the integration tests: the synthetic news fixture and
//! a one-call train helper.
//!
//! The fixture CSVs under tests/fixtures/ are committed artifacts. They were
//! produced once by `synthetic_corpus` below with seed 42 and are guarded by
//! a regeneration test, so any change to the generator or the serializer
//! shows up as a diff instead of silently shifting every downstream number.

#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use veridict_core::bundle::{BundlePayload, ModelBundle, Provenance};
use veridict_core::classifiers::ClassifierModel;
use veridict_core::corpus::{Article, Corpus};
use veridict_core::features::{
    build_vocabulary, featurize, fit_idf, vectorize, FeatureConfig, Representation,
};
use veridict_core::preprocess::Preprocessor;
use veridict_core::{train_linear, train_nb, Label, LinearKind, PipelineConfig, TrainConfig};

pub const FIXTURE_SEED: u64 = 42;
pub const TRAIN_CSV: &str = include_str!("../fixtures/synthetic_train.csv");
pub const TEST_CSV: &str = include_str!("../fixtures/synthetic_test.csv");

const FAKE_MARKERS: [&str; 10] = [
    "hoax",
    "fabricated",
    "clickbait",
    "rumor",
    "conspiracy",
    "shocking",
    "exposed",
    "secret",
    "miracle",
    "scandal",
];

const REAL_MARKERS: [&str; 10] = [
    "report",
    "official",
    "budget",
    "committee",
    "senate",
    "policy",
    "economy",
    "research",
    "study",
    "minister",
];

const FILLER: [&str; 14] = [
    "city",
    "people",
    "story",
    "media",
    "morning",
    "online",
    "video",
    "statement",
    "week",
    "source",
    "message",
    "public",
    "reader",
    "headline",
];

const GLUE: [&str; 6] = ["the", "and", "of", "in", "with", "about"];

fn synthetic_article(rng: &mut ChaCha8Rng, index: usize, label: Label) -> Article {
    let markers: &[&str] = match label {
        Label::Fake => &FAKE_MARKERS,
        Label::Real => &REAL_MARKERS,
    };
    let mut words: Vec<&str> = Vec::new();
    for _ in 0..rng.random_range(3..=6) {
        words.push(markers.choose(rng).unwrap());
    }
    for _ in 0..rng.random_range(4..=8) {
        words.push(FILLER.choose(rng).unwrap());
    }
    let mut text: Vec<&str> = Vec::new();
    for word in words {
        if rng.random_range(0..3) == 0 {
            text.push(GLUE.choose(rng).unwrap());
        }
        text.push(word);
    }
    let split = 3.min(text.len());
    Article {
        id: format!("fx-{index:04}"),
        title: text[..split].join(" "),
        body: text[split..].join(" "),
        label: Some(label),
    }
}

/// Deterministic synthetic corpus: `n` articles alternating FAKE/REAL, so
/// classes are exactly balanced for even `n`.
pub fn synthetic_corpus(seed: u64, n: usize, first_index: usize, name: &str) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let articles = (0..n)
        .map(|i| {
            let label = if i % 2 == 0 { Label::Fake } else { Label::Real };
            synthetic_article(&mut rng, first_index + i, label)
        })
        .collect();
    Corpus::new(articles, name).unwrap()
}

/// The committed fixture pair: 200 train and 50 test articles drawn from one
/// seed-42 stream (test articles continue where training ones stop).
pub fn fixture_corpora() -> (Corpus, Corpus) {
    let mut rng = ChaCha8Rng::seed_from_u64(FIXTURE_SEED);
    let mut articles: Vec<Article> = (0..250)
        .map(|i| {
            let label = if i % 2 == 0 { Label::Fake } else { Label::Real };
            synthetic_article(&mut rng, i, label)
        })
        .collect();
    let test_articles = articles.split_off(200);
    (
        Corpus::new(articles, "synthetic_train").unwrap(),
        Corpus::new(test_articles, "synthetic_test").unwrap(),
    )
}

pub fn load_fixture_corpora() -> (Corpus, Corpus) {
    (
        parse_fixture_csv(TRAIN_CSV, "synthetic_train"),
        parse_fixture_csv(TEST_CSV, "synthetic_test"),
    )
}

fn parse_fixture_csv(text: &str, name: &str) -> Corpus {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let articles = reader
        .records()
        .map(|record| {
            let record = record.unwrap();
            Article {
                id: record[0].to_string(),
                title: record[1].to_string(),
                body: record[2].to_string(),
                label: Some(match &record[3] {
                    "fake" => Label::Fake,
                    "real" => Label::Real,
                    other => panic!("unexpected label {other}"),
                }),
            }
        })
        .collect();
    Corpus::new(articles, name).unwrap()
}

/// Preprocesses, fits vocabulary + idf on the training corpus, trains the
/// requested classifier, and seals everything into a bundle.
pub fn train_fixture_bundle(
    train: &Corpus,
    kind: Option<LinearKind>,
    train_config: &TrainConfig,
    feature_config: &FeatureConfig,
) -> ModelBundle {
    let pipeline = PipelineConfig::default();
    let preprocessor = Preprocessor::new(pipeline.clone()).unwrap();
    let docs: Vec<Vec<String>> = train.iter().map(|a| preprocessor.run(&a.text())).collect();
    let vocabulary = build_vocabulary(&docs, 1, None).unwrap();
    let matrix = vectorize(&docs, &vocabulary);
    let tfidf = match feature_config.representation {
        Representation::Tfidf => Some(fit_idf(&matrix, &vocabulary).unwrap()),
        Representation::Counts => None,
    };
    let features = featurize(&matrix, tfidf.as_ref(), feature_config).unwrap();
    let labels = train.labels().unwrap();
    let classifier = match kind {
        None => ClassifierModel::NaiveBayes(train_nb(&features, &labels, 1.0).unwrap()),
        Some(kind) => {
            ClassifierModel::Linear(train_linear(kind, &features, &labels, train_config).unwrap())
        }
    };
    let stopwords = preprocessor
        .stopwords()
        .map(|list| list.words().map(str::to_string).collect());
    ModelBundle::new(BundlePayload {
        pipeline,
        stopwords,
        feature_config: *feature_config,
        vocabulary,
        tfidf,
        classifier,
        provenance: Provenance {
            dataset_name: train.source_name().to_string(),
            seed: train_config.seed,
            train_config: train_config.clone(),
            created_at: "1970-01-01T00:00:00Z".to_string(),
        },
    })
    .unwrap()
}
