//! The four classifiers behind one train/predict surface: multinomial
//! Naïve Bayes, a Pegasos-style linear SVM, Passive-Aggressive (PA-I), and
//! logistic regression. Classes are encoded FAKE → +1, REAL → −1, and every
//! tie resolves to FAKE.

mod linear;
mod naive_bayes;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::sparse::SparseVector;

pub use linear::{pa_update, predict_linear, train_linear, LinearKind, LinearModel};
pub use naive_bayes::{predict_nb, train_nb, ClassPair, NaiveBayesModel};

/// Hyperparameters for the online linear trainers. A snapshot travels with
/// every trained model so a bundle can state exactly how it was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub seed: u64,
    pub shuffle_each_epoch: bool,
    /// PA aggressiveness cap C.
    pub aggressiveness: f64,
    /// SVM regularization strength λ.
    pub regularization: f64,
    /// LR initial learning rate η₀.
    pub learning_rate: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 10,
            seed: 42,
            shuffle_each_epoch: true,
            aggressiveness: 1.0,
            regularization: 1e-4,
            learning_rate: 0.1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::invalid("epochs", "must be at least 1"));
        }
        for (name, value) in [
            ("aggressiveness", self.aggressiveness),
            ("regularization", self.regularization),
            ("learning_rate", self.learning_rate),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::invalid(name, format!("{value} is not positive")));
            }
        }
        Ok(())
    }
}

/// Any trained classifier, as stored in a model bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ClassifierModel {
    NaiveBayes(NaiveBayesModel),
    Linear(LinearModel),
}

/// A single prediction: the label, a signed score (log-odds for NB, margin
/// for the linear models; positive means FAKE), and a probability where the
/// model defines one (NB posterior, LR sigmoid).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: Label,
    pub score: f64,
    pub probability: Option<f64>,
}

impl ClassifierModel {
    pub fn predict(&self, x: &SparseVector) -> Prediction {
        match self {
            ClassifierModel::NaiveBayes(model) => {
                let (label, scores) = predict_nb(model, x);
                let score = scores.fake - scores.real;
                Prediction {
                    label,
                    score,
                    probability: Some(sigmoid(score)),
                }
            }
            ClassifierModel::Linear(model) => {
                let (label, margin) = predict_linear(model, x);
                Prediction {
                    label,
                    score: margin,
                    probability: (model.kind() == LinearKind::Lr).then(|| sigmoid(margin)),
                }
            }
        }
    }

    /// Feature dimension this model was trained for.
    pub fn num_terms(&self) -> usize {
        match self {
            ClassifierModel::NaiveBayes(model) => model.num_terms(),
            ClassifierModel::Linear(model) => model.num_terms(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ClassifierModel::NaiveBayes(_) => "nb",
            ClassifierModel::Linear(model) => model.kind().as_str(),
        }
    }

    /// Re-checks internal consistency; run on models from untrusted files.
    pub fn validate(&self) -> Result<()> {
        match self {
            ClassifierModel::NaiveBayes(model) => model.validate(),
            ClassifierModel::Linear(model) => model.validate(),
        }
    }
}

/// Numerically stable logistic function.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Shared trainer precondition: labels parallel to rows, both classes
/// present, every feature value finite.
fn check_training_input(rows: &[SparseVector], labels: &[Label]) -> Result<()> {
    if rows.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: rows.len(),
            right: labels.len(),
        });
    }
    if !labels.contains(&Label::Fake) || !labels.contains(&Label::Real) {
        return Err(Error::SingleClass);
    }
    for (row, vector) in rows.iter().enumerate() {
        if !vector.all_finite() {
            return Err(Error::NonFiniteFeature { row });
        }
    }
    Ok(())
}
