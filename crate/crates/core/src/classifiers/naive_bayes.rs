//! Multinomial Naïve Bayes with additive (Laplace) smoothing, trained and
//! applied in log space. The evidence term P(x) is never computed: it is
//! class-independent, so the argmax is unchanged without it.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::sparse::SparseVector;

/// A per-class pair of values, FAKE first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassPair<T> {
    pub fake: T,
    pub real: T,
}

impl<T> ClassPair<T> {
    pub fn get(&self, label: Label) -> &T {
        match label {
            Label::Fake => &self.fake,
            Label::Real => &self.real,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    log_prior: ClassPair<f64>,
    log_likelihood: ClassPair<Vec<f64>>,
    alpha: f64,
    num_terms: usize,
}

impl NaiveBayesModel {
    pub fn num_terms(&self) -> usize {
        self.num_terms
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn log_prior(&self, label: Label) -> f64 {
        *self.log_prior.get(label)
    }

    pub fn log_likelihood(&self, label: Label) -> &[f64] {
        self.log_likelihood.get(label)
    }

    pub fn validate(&self) -> Result<()> {
        if self.log_likelihood.fake.len() != self.num_terms
            || self.log_likelihood.real.len() != self.num_terms
        {
            return Err(Error::DimensionMismatch {
                expected: self.num_terms,
                found: self.log_likelihood.fake.len(),
            });
        }
        Ok(())
    }
}

/// Fits priors and smoothed per-class term distributions.
///
/// P(c) = docs in c / m; P(t|c) = (count(t,c) + α) / (total(c) + α·n).
/// Feature values need not be integral: TF-IDF rows train the same way,
/// with weighted "counts" in both numerator and denominator.
pub fn train_nb(features: &FeatureMatrix, labels: &[Label], alpha: f64) -> Result<NaiveBayesModel> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid("alpha", format!("{alpha} is not positive")));
    }
    super::check_training_input(&features.rows, labels)?;

    let n = features.num_terms;
    let mut counts = ClassPair {
        fake: vec![0.0f64; n],
        real: vec![0.0f64; n],
    };
    let mut totals = ClassPair {
        fake: 0.0,
        real: 0.0,
    };
    let mut docs = ClassPair {
        fake: 0usize,
        real: 0usize,
    };

    for (row, &label) in features.rows.iter().zip(labels) {
        let (class_counts, class_total, class_docs) = match label {
            Label::Fake => (&mut counts.fake, &mut totals.fake, &mut docs.fake),
            Label::Real => (&mut counts.real, &mut totals.real, &mut docs.real),
        };
        *class_docs += 1;
        for (t, value) in row.iter() {
            if t >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: t + 1,
                });
            }
            class_counts[t] += value;
            *class_total += value;
        }
    }

    let m = labels.len() as f64;
    let smooth = |class_counts: &[f64], class_total: f64| -> Vec<f64> {
        let denominator = class_total + alpha * n as f64;
        class_counts
            .iter()
            .map(|&c| ((c + alpha) / denominator).ln())
            .collect()
    };

    Ok(NaiveBayesModel {
        log_prior: ClassPair {
            fake: (docs.fake as f64 / m).ln(),
            real: (docs.real as f64 / m).ln(),
        },
        log_likelihood: ClassPair {
            fake: smooth(&counts.fake, totals.fake),
            real: smooth(&counts.real, totals.real),
        },
        alpha,
        num_terms: n,
    })
}

/// Scores both classes and returns the argmax, FAKE on a tie.
/// score(c) = log P(c) + Σ_t count_t · log P(t|c); an empty vector reduces
/// to the prior alone.
pub fn predict_nb(model: &NaiveBayesModel, counts: &SparseVector) -> (Label, ClassPair<f64>) {
    let mut scores = ClassPair {
        fake: model.log_prior.fake,
        real: model.log_prior.real,
    };
    for (t, count) in counts.iter() {
        scores.fake += count * model.log_likelihood.fake[t];
        scores.real += count * model.log_likelihood.real[t];
    }
    let label = if scores.fake >= scores.real {
        Label::Fake
    } else {
        Label::Real
    };
    (label, scores)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// d1 = [fake, fake, news] labeled FAKE; d2 = [real, news] labeled REAL;
    /// vocabulary indices: fake=0, news=1, real=2.
    fn two_doc_features() -> (FeatureMatrix, Vec<Label>) {
        let rows = vec![
            SparseVector::from_sorted(vec![(0, 2.0), (1, 1.0)]),
            SparseVector::from_sorted(vec![(1, 1.0), (2, 1.0)]),
        ];
        (
            FeatureMatrix { rows, num_terms: 3 },
            vec![Label::Fake, Label::Real],
        )
    }

    #[test]
    fn smoothed_probabilities_match_hand_computation() {
        let (features, labels) = two_doc_features();
        let model = train_nb(&features, &labels, 1.0).unwrap();

        let p = |label, t: usize| model.log_likelihood(label)[t].exp();
        assert!((p(Label::Fake, 0) - 0.5).abs() < 1e-12); // (2+1)/(3+3)
        assert!((p(Label::Fake, 1) - 2.0 / 6.0).abs() < 1e-12);
        assert!((p(Label::Fake, 2) - 1.0 / 6.0).abs() < 1e-12);
        assert!((p(Label::Real, 2) - 0.4).abs() < 1e-12); // (1+1)/(2+3)
        assert!((model.log_prior(Label::Fake).exp() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn likelihoods_sum_to_one_per_class() {
        let (features, labels) = two_doc_features();
        for alpha in [0.5, 1.0, 2.0] {
            let model = train_nb(&features, &labels, alpha).unwrap();
            for label in [Label::Fake, Label::Real] {
                let sum: f64 = model.log_likelihood(label).iter().map(|l| l.exp()).sum();
                assert!((sum - 1.0).abs() < 1e-9, "alpha={alpha} sum={sum}");
            }
        }
    }

    #[test]
    fn fake_news_document_is_classified_fake() {
        let (features, labels) = two_doc_features();
        let model = train_nb(&features, &labels, 1.0).unwrap();
        let input = SparseVector::from_sorted(vec![(0, 1.0), (1, 1.0)]);
        let (label, scores) = predict_nb(&model, &input);
        assert_eq!(label, Label::Fake);

        let expected_fake = 0.5f64.ln() + 0.5f64.ln() + (2.0f64 / 6.0).ln();
        let expected_real = 0.5f64.ln() + 0.2f64.ln() + 0.4f64.ln();
        assert!((scores.fake - expected_fake).abs() < 1e-12);
        assert!((scores.real - expected_real).abs() < 1e-12);
    }

    #[test]
    fn empty_vector_falls_back_to_the_prior() {
        let (mut features, mut labels) = two_doc_features();
        // Make FAKE the majority class so the prior decides.
        features
            .rows
            .push(SparseVector::from_sorted(vec![(0, 1.0)]));
        labels.push(Label::Fake);
        let model = train_nb(&features, &labels, 1.0).unwrap();
        let (label, scores) = predict_nb(&model, &SparseVector::empty());
        assert_eq!(label, Label::Fake);
        assert!((scores.fake - model.log_prior(Label::Fake)).abs() < 1e-15);
    }

    #[test]
    fn equal_scores_resolve_to_fake() {
        // Mirror-image corpus: swapping fake↔real swaps the classes, so a
        // balanced input scores identically under both.
        let rows = vec![
            SparseVector::from_sorted(vec![(0, 1.0)]),
            SparseVector::from_sorted(vec![(1, 1.0)]),
        ];
        let features = FeatureMatrix { rows, num_terms: 2 };
        let labels = vec![Label::Fake, Label::Real];
        let model = train_nb(&features, &labels, 1.0).unwrap();
        let balanced = SparseVector::from_sorted(vec![(0, 1.0), (1, 1.0)]);
        let (label, scores) = predict_nb(&model, &balanced);
        assert_eq!(scores.fake, scores.real);
        assert_eq!(label, Label::Fake);
    }

    #[test]
    fn single_class_corpus_is_an_error() {
        let rows = vec![SparseVector::from_sorted(vec![(0, 1.0)]); 2];
        let features = FeatureMatrix { rows, num_terms: 1 };
        let result = train_nb(&features, &[Label::Fake, Label::Fake], 1.0);
        assert!(matches!(result, Err(Error::SingleClass)));
    }

    #[test]
    fn nonpositive_alpha_is_an_error() {
        let (features, labels) = two_doc_features();
        assert!(train_nb(&features, &labels, 0.0).is_err());
        assert!(train_nb(&features, &labels, -1.0).is_err());
    }
}
