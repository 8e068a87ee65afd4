//! Fake-news classification pipeline: CSV corpus loading, tokenize /
//! stopword / Porter-stem preprocessing, count and tf-idf features, four
//! online classifiers (multinomial Naïve Bayes, a Pegasos-style linear SVM,
//! Passive-Aggressive PA-I, logistic regression), FAKE-positive evaluation
//! metrics, and checksummed model bundles.
//!
//! Everything is deterministic: seeded shuffles, no iteration over unordered
//! maps, and training the same data with the same config twice produces
//! bit-identical models.

pub mod bundle;
pub mod classifiers;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod preprocess;
pub mod sparse;

pub use bundle::{BundlePayload, ModelBundle, Provenance, TextPrediction, BUNDLE_FORMAT_VERSION};
pub use classifiers::{
    train_linear, train_nb, ClassifierModel, LinearKind, LinearModel, NaiveBayesModel, Prediction,
    TrainConfig,
};
pub use corpus::{
    class_distribution, load_dataset, Article, Corpus, DatasetSchema, Label, LabelMap, SplitSpec,
};
pub use error::{Error, Result};
pub use eval::{
    compare, confusion, evaluate, metrics, CompareGrid, ConfusionMatrix, Evaluation, MetricsReport,
};
pub use features::{
    build_vocabulary, count_vectorize, featurize, fit_idf, tfidf_transform, vectorize,
    FeatureConfig, FeatureMatrix, Representation, TfidfModel, Vocabulary,
};
pub use preprocess::{porter_stem, tokenize, PipelineConfig, Preprocessor, StopwordList};
pub use sparse::SparseVector;
