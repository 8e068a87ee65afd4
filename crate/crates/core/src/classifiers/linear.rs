//! Online linear models sharing one decision rule, sign(w·x + bias):
//!
//! * PA-I: per-example closed-form update τ = min(C, ℓ/(‖x‖²+1)); the +1
//!   treats the bias as a constant feature, so a zero vector still updates.
//! * SVM: Pegasos-style stochastic subgradient on the hinge loss with L2
//!   regularization, η_t = 1/(λt); the bias is not regularized.
//! * LR: stochastic gradient on the log loss with a decaying rate
//!   η_t = η₀/(1 + t/T).
//!
//! Training visits examples in a seeded shuffle order, so identical
//! (data, config) inputs give bit-identical weights.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::sparse::SparseVector;

use super::{sigmoid, TrainConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearKind {
    Svm,
    Pa,
    Lr,
}

impl LinearKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LinearKind::Svm => "svm",
            LinearKind::Pa => "pa",
            LinearKind::Lr => "lr",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    weights: Vec<f64>,
    bias: f64,
    kind: LinearKind,
    config: TrainConfig,
}

impl LinearModel {
    /// Assembles a model from raw parts; exposed for tests and tooling.
    pub fn from_parts(weights: Vec<f64>, bias: f64, kind: LinearKind, config: TrainConfig) -> Self {
        LinearModel {
            weights,
            bias,
            kind,
            config,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn kind(&self) -> LinearKind {
        self.kind
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn num_terms(&self) -> usize {
        self.weights.len()
    }

    pub fn margin(&self, x: &SparseVector) -> f64 {
        x.dot_dense(&self.weights) + self.bias
    }

    pub fn validate(&self) -> Result<()> {
        if !self.bias.is_finite() || self.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("weights", "non-finite parameter"));
        }
        self.config.validate()
    }
}

/// One PA-I step in place. Returns τ: zero means the example already had
/// margin ≥ 1 and nothing changed (the "passive" half of the name).
///
/// ℓ = max(0, 1 − y(w·x + b)); τ = min(C, ℓ/(‖x‖² + 1));
/// w += τ·y·x; b += τ·y. When τ < C the updated margin is exactly 1.
pub fn pa_update(weights: &mut [f64], bias: &mut f64, x: &SparseVector, y: f64, c: f64) -> f64 {
    debug_assert!(y == 1.0 || y == -1.0);
    debug_assert!(c > 0.0);
    let margin = y * (x.dot_dense(weights) + *bias);
    let loss = (1.0 - margin).max(0.0);
    if loss == 0.0 {
        return 0.0;
    }
    let tau = c.min(loss / (x.squared_norm() + 1.0));
    for (i, v) in x.iter() {
        weights[i] += tau * y * v;
    }
    *bias += tau * y;
    tau
}

/// Trains one of the linear kinds over seeded-shuffled epochs.
pub fn train_linear(
    kind: LinearKind,
    features: &FeatureMatrix,
    labels: &[Label],
    config: &TrainConfig,
) -> Result<LinearModel> {
    config.validate()?;
    super::check_training_input(&features.rows, labels)?;
    for (row_index, row) in features.rows.iter().enumerate() {
        if row.max_index().is_some_and(|i| i >= features.num_terms) {
            return Err(Error::DimensionMismatch {
                expected: features.num_terms,
                found: row.max_index().unwrap() + 1,
            });
        }
        debug_assert!(row.all_finite(), "row {row_index}");
    }

    let m = features.rows.len();
    let total_steps = config.epochs * m;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..m).collect();

    let mut weights = vec![0.0f64; features.num_terms];
    let mut bias = 0.0f64;

    // SVM keeps w = scale · direction so the per-step shrink is O(1);
    // the direction is rescaled whenever the factor underflows toward zero.
    let mut scale = 1.0f64;
    const MIN_SCALE: f64 = 1e-9;

    let mut t = 0usize;
    for _ in 0..config.epochs {
        if config.shuffle_each_epoch {
            order.shuffle(&mut rng);
        }
        for &i in &order {
            t += 1;
            let x = &features.rows[i];
            let y = labels[i].signum();
            match kind {
                LinearKind::Pa => {
                    pa_update(&mut weights, &mut bias, x, y, config.aggressiveness);
                }
                LinearKind::Svm => {
                    let lambda = config.regularization;
                    let eta = 1.0 / (lambda * t as f64);
                    let margin = y * (scale * x.dot_dense(&weights) + bias);
                    let shrink = 1.0 - eta * lambda;
                    if shrink == 0.0 {
                        // Only at t = 1, where the shrink wipes w entirely.
                        weights.iter_mut().for_each(|w| *w = 0.0);
                        scale = 1.0;
                    } else {
                        scale *= shrink;
                    }
                    if margin < 1.0 {
                        for (j, v) in x.iter() {
                            weights[j] += eta * y * v / scale;
                        }
                        bias += eta * y;
                    }
                    if scale < MIN_SCALE {
                        weights.iter_mut().for_each(|w| *w *= scale);
                        scale = 1.0;
                    }
                }
                LinearKind::Lr => {
                    let eta = config.learning_rate / (1.0 + t as f64 / total_steps as f64);
                    let z = x.dot_dense(&weights) + bias;
                    // y01 encodes FAKE as 1.
                    let y01 = if y > 0.0 { 1.0 } else { 0.0 };
                    let gradient = y01 - sigmoid(z);
                    for (j, v) in x.iter() {
                        weights[j] += eta * gradient * v;
                    }
                    bias += eta * gradient;
                }
            }
        }
    }

    if kind == LinearKind::Svm && scale != 1.0 {
        weights.iter_mut().for_each(|w| *w *= scale);
    }

    Ok(LinearModel {
        weights,
        bias,
        kind,
        config: config.clone(),
    })
}

/// Applies the decision rule: margin > 0 → FAKE, margin < 0 → REAL, and a
/// margin of exactly 0 → FAKE.
pub fn predict_linear(model: &LinearModel, x: &SparseVector) -> (Label, f64) {
    let margin = model.margin(x);
    let label = if margin >= 0.0 {
        Label::Fake
    } else {
        Label::Real
    };
    (label, margin)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pa_first_update_matches_closed_form() {
        let mut weights = vec![0.0, 0.0, 0.0];
        let mut bias = 0.0;
        let x = SparseVector::from_sorted(vec![(0, 1.0)]);
        let tau = pa_update(&mut weights, &mut bias, &x, 1.0, 1.0);
        assert!((tau - 0.5).abs() < 1e-15);
        assert!((weights[0] - 0.5).abs() < 1e-15);
        assert!((bias - 0.5).abs() < 1e-15);
        assert_eq!(&weights[1..], &[0.0, 0.0]);
    }

    #[test]
    fn pa_leaves_confident_examples_alone() {
        let mut weights = vec![2.0];
        let mut bias = 0.0;
        let x = SparseVector::from_sorted(vec![(0, 1.0)]);
        let tau = pa_update(&mut weights, &mut bias, &x, 1.0, 10.0);
        assert_eq!(tau, 0.0);
        assert_eq!(weights, vec![2.0]);
        assert_eq!(bias, 0.0);
    }

    #[test]
    fn pa_zero_vector_updates_bias_only() {
        let mut weights = vec![0.0];
        let mut bias = 0.0;
        let x = SparseVector::empty();
        let tau = pa_update(&mut weights, &mut bias, &x, -1.0, 10.0);
        // ℓ = 1, denominator = 1, so τ = 1 and the bias moves to −1.
        assert!((tau - 1.0).abs() < 1e-15);
        assert_eq!(weights, vec![0.0]);
        assert!((bias + 1.0).abs() < 1e-15);
    }

    #[test]
    fn predict_linear_tie_goes_to_fake() {
        let model = LinearModel::from_parts(vec![1.0], 0.0, LinearKind::Pa, TrainConfig::default());
        let (label, margin) = predict_linear(&model, &SparseVector::empty());
        assert_eq!(margin, 0.0);
        assert_eq!(label, Label::Fake);
    }

    #[test]
    fn predict_linear_reports_the_margin() {
        let model =
            LinearModel::from_parts(vec![1.0, 0.0], 0.0, LinearKind::Svm, TrainConfig::default());
        let x = SparseVector::from_sorted(vec![(0, 2.0)]);
        assert_eq!(predict_linear(&model, &x), (Label::Fake, 2.0));
        let model =
            LinearModel::from_parts(vec![0.0], -0.5, LinearKind::Svm, TrainConfig::default());
        assert_eq!(
            predict_linear(&model, &SparseVector::empty()),
            (Label::Real, -0.5)
        );
    }

    #[test]
    fn zero_epochs_is_rejected() {
        let features = FeatureMatrix {
            rows: vec![
                SparseVector::from_sorted(vec![(0, 1.0)]),
                SparseVector::from_sorted(vec![(1, 1.0)]),
            ],
            num_terms: 2,
        };
        let labels = [Label::Fake, Label::Real];
        let config = TrainConfig {
            epochs: 0,
            ..TrainConfig::default()
        };
        assert!(train_linear(LinearKind::Pa, &features, &labels, &config).is_err());
    }

    #[test]
    fn pa_training_is_fully_passive_on_pre_separated_data() {
        // Both examples already have margin ≥ 1 under w = (2, −2), b = 0, so
        // every epoch leaves the weights exactly as they started. Training
        // from zero must therefore stop changing after the margins reach 1;
        // here we verify the passive property at the single-update level
        // across a whole epoch sweep.
        let features = FeatureMatrix {
            rows: vec![
                SparseVector::from_sorted(vec![(0, 1.0)]),
                SparseVector::from_sorted(vec![(1, 1.0)]),
            ],
            num_terms: 2,
        };
        let labels = [Label::Fake, Label::Real];
        let mut weights = vec![2.0, -2.0];
        let mut bias = 0.0;
        for _ in 0..10 {
            for (row, label) in features.rows.iter().zip(&labels) {
                let tau = pa_update(&mut weights, &mut bias, row, label.signum(), 1.0);
                assert_eq!(tau, 0.0);
            }
        }
        assert_eq!(weights, vec![2.0, -2.0]);
        assert_eq!(bias, 0.0);
    }

    #[test]
    fn identical_seeds_give_identical_models() {
        let features = FeatureMatrix {
            rows: (0..20)
                .map(|i| SparseVector::from_sorted(vec![(i % 5, 1.0 + i as f64 / 10.0)]))
                .collect(),
            num_terms: 5,
        };
        let labels: Vec<Label> = (0..20)
            .map(|i| if i % 2 == 0 { Label::Fake } else { Label::Real })
            .collect();
        let config = TrainConfig::default();
        for kind in [LinearKind::Pa, LinearKind::Svm, LinearKind::Lr] {
            let a = train_linear(kind, &features, &labels, &config).unwrap();
            let b = train_linear(kind, &features, &labels, &config).unwrap();
            assert_eq!(a, b);
        }
    }
}
