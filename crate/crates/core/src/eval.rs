//! Accuracy, precision, and recall with FAKE as the positive class, plus the
//! pairwise accuracy comparison grid. Zero-denominator metrics come back as
//! 0.0 with a warning flag instead of an error so degenerate test slices
//! don't abort batch runs.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bundle::ModelBundle;
use crate::classifiers::ClassPair;
use crate::corpus::{Corpus, Label};
use crate::error::{Error, Result};

/// Chance level for a binary task; `evaluate` flags accuracy at or above it.
pub const BASELINE_ACCURACY: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    #[serde(rename = "tp")]
    pub true_positives: usize,
    #[serde(rename = "fp")]
    pub false_positives: usize,
    #[serde(rename = "fn")]
    pub false_negatives: usize,
    #[serde(rename = "tn")]
    pub true_negatives: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.true_positives + self.false_positives + self.false_negatives + self.true_negatives
    }

    /// Actual FAKE articles, regardless of what was predicted.
    pub fn support_fake(&self) -> usize {
        self.true_positives + self.false_negatives
    }

    pub fn support_real(&self) -> usize {
        self.true_negatives + self.false_positives
    }
}

/// Precision/recall/f1 with one class treated as positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub classifier: String,
    pub dataset: String,
    pub accuracy: f64,
    /// FAKE-positive precision; the REAL-positive view sits in `per_class`.
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support_fake: usize,
    pub support_real: usize,
    pub per_class: ClassPair<ClassMetrics>,
    pub zero_division_warning: bool,
    pub confusion: ConfusionMatrix,
}

pub fn confusion(predicted: &[Label], actual: &[Label]) -> Result<ConfusionMatrix> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: actual.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::invalid("predicted", "no predictions to score"));
    }
    let mut cm = ConfusionMatrix {
        true_positives: 0,
        false_positives: 0,
        false_negatives: 0,
        true_negatives: 0,
    };
    for (&p, &a) in predicted.iter().zip(actual) {
        match (p, a) {
            (Label::Fake, Label::Fake) => cm.true_positives += 1,
            (Label::Fake, Label::Real) => cm.false_positives += 1,
            (Label::Real, Label::Fake) => cm.false_negatives += 1,
            (Label::Real, Label::Real) => cm.true_negatives += 1,
        }
    }
    Ok(cm)
}

/// tp/(tp+fp) and friends, with 0/0 mapped to 0.0 and flagged.
fn ratio(numerator: usize, denominator: usize, warned: &mut bool) -> f64 {
    if denominator == 0 {
        *warned = true;
        0.0
    } else {
        numerator as f64 / denominator as f64
    }
}

fn class_metrics(tp: usize, fp: usize, fn_: usize, warned: &mut bool) -> ClassMetrics {
    let precision = ratio(tp, tp + fp, warned);
    let recall = ratio(tp, tp + fn_, warned);
    let f1 = if precision + recall == 0.0 {
        *warned = true;
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ClassMetrics {
        precision,
        recall,
        f1,
        support: tp + fn_,
    }
}

/// Scores a confusion matrix. `classifier` and `dataset` are left empty for
/// the caller to fill in.
pub fn metrics(cm: &ConfusionMatrix) -> MetricsReport {
    let mut warned = false;
    let accuracy = ratio(
        cm.true_positives + cm.true_negatives,
        cm.total(),
        &mut warned,
    );
    let fake = class_metrics(
        cm.true_positives,
        cm.false_positives,
        cm.false_negatives,
        &mut warned,
    );
    let real = class_metrics(
        cm.true_negatives,
        cm.false_negatives,
        cm.false_positives,
        &mut warned,
    );
    MetricsReport {
        classifier: String::new(),
        dataset: String::new(),
        accuracy,
        precision: fake.precision,
        recall: fake.recall,
        f1: fake.f1,
        support_fake: cm.support_fake(),
        support_real: cm.support_real(),
        per_class: ClassPair { fake, real },
        zero_division_warning: warned,
        confusion: *cm,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub report: MetricsReport,
    pub baseline_passed: bool,
}

/// Runs the bundle's full pipeline over every test article and scores the
/// result. The accuracy in the report is exactly `metrics(confusion(..))` on
/// the collected predictions; there is no second scoring path.
pub fn evaluate(bundle: &ModelBundle, test: &Corpus) -> Result<Evaluation> {
    let mut predicted = Vec::with_capacity(test.len());
    let mut actual = Vec::with_capacity(test.len());
    for article in test.iter() {
        let label = article.label.ok_or_else(|| Error::Unlabeled {
            id: article.id.clone(),
        })?;
        let outcome = bundle.predict_text(&article.text())?;
        predicted.push(outcome.prediction.label);
        actual.push(label);
    }
    let cm = confusion(&predicted, &actual)?;
    let mut report = metrics(&cm);
    report.classifier = bundle.payload().classifier.kind_name().to_string();
    report.dataset = test.source_name().to_string();
    let baseline_passed = report.accuracy >= BASELINE_ACCURACY;
    Ok(Evaluation {
        report,
        baseline_passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparePair {
    pub left: String,
    pub right: String,
    pub left_accuracy: f64,
    pub right_accuracy: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareGrid {
    pub dataset: String,
    pub entries: Vec<ComparePair>,
}

/// Evaluates each named bundle once, then emits every unordered pair in
/// input order. Deltas are differences of the already-reported accuracies,
/// so they agree with single-bundle evaluation to the last bit.
pub fn compare(bundles: &[(String, ModelBundle)], test: &Corpus) -> Result<CompareGrid> {
    if bundles.len() < 2 {
        return Err(Error::invalid(
            "bundles",
            "comparison needs at least two models",
        ));
    }
    let mut accuracies = Vec::with_capacity(bundles.len());
    for (name, bundle) in bundles {
        let evaluation = evaluate(bundle, test)?;
        accuracies.push((name.clone(), evaluation.report.accuracy));
    }
    let mut entries = Vec::new();
    for i in 0..accuracies.len() {
        for j in i + 1..accuracies.len() {
            let (ref left, left_accuracy) = accuracies[i];
            let (ref right, right_accuracy) = accuracies[j];
            entries.push(ComparePair {
                left: left.clone(),
                right: right.clone(),
                left_accuracy,
                right_accuracy,
                delta: left_accuracy - right_accuracy,
            });
        }
    }
    Ok(CompareGrid {
        dataset: test.source_name().to_string(),
        entries,
    })
}

pub fn format_report(report: &MetricsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "classifier  {}", report.classifier);
    let _ = writeln!(out, "dataset     {}", report.dataset);
    let _ = writeln!(out, "accuracy    {:.4}", report.accuracy);
    let _ = writeln!(
        out,
        "precision   {:.4}  (positive class FAKE)",
        report.precision
    );
    let _ = writeln!(out, "recall      {:.4}", report.recall);
    let _ = writeln!(out, "f1          {:.4}", report.f1);
    let _ = writeln!(
        out,
        "support     FAKE {}  REAL {}",
        report.support_fake, report.support_real
    );
    let cm = &report.confusion;
    let _ = writeln!(
        out,
        "confusion   tp {}  fp {}  fn {}  tn {}",
        cm.true_positives, cm.false_positives, cm.false_negatives, cm.true_negatives
    );
    let _ = writeln!(
        out,
        "per-class   REAL precision {:.4}  recall {:.4}  f1 {:.4}",
        report.per_class.real.precision, report.per_class.real.recall, report.per_class.real.f1
    );
    if report.zero_division_warning {
        let _ = writeln!(out, "warning     zero-denominator metric reported as 0.0");
    }
    out
}

pub fn format_compare(grid: &CompareGrid) -> String {
    let name_width = grid
        .entries
        .iter()
        .flat_map(|e| [e.left.len(), e.right.len()])
        .max()
        .unwrap_or(4)
        .max(5);
    let mut out = String::new();
    let _ = writeln!(out, "dataset: {}", grid.dataset);
    let _ = writeln!(
        out,
        "{:<name_width$}  {:<name_width$}  {:>9}  {:>9}  {:>9}",
        "left", "right", "acc_left", "acc_right", "delta"
    );
    for e in &grid.entries {
        let _ = writeln!(
            out,
            "{:<name_width$}  {:<name_width$}  {:>9.4}  {:>9.4}  {:>+9.4}",
            e.left, e.right, e.left_accuracy, e.right_accuracy, e.delta
        );
    }
    out
}
