//! Softmax (multinomial logistic) regression on TF-IDF features, trained by
//! full-batch gradient descent from zero weights.

use serde::{Deserialize, Serialize};

use super::features::{featurize, FeatureVector};
use super::{class_index, class_names, softmax_in_place, Classifier, Prediction};
use crate::corpus::TokenSequence;
use crate::error::{Error, Result};
use crate::labeling::{ClassLabel, LabeledExample};
use crate::topics::Vocabulary;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrHyperparameters {
    pub learning_rate: f64,
    /// Strength of the `l2/2 · ||W||²` penalty; biases are not penalized.
    pub l2: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for LrHyperparameters {
    fn default() -> Self {
        LrHyperparameters {
            learning_rate: 0.5,
            l2: 1e-4,
            epochs: 200,
            seed: 0,
        }
    }
}

/// Weights (row-major, classes × dimension) and per-class biases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrParameters {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl LrParameters {
    pub fn zeros(n_classes: usize, dimension: usize) -> Self {
        LrParameters {
            weights: vec![0.0; n_classes * dimension],
            bias: vec![0.0; n_classes],
        }
    }
}

/// Mean softmax cross-entropy plus L2 penalty over a fixed dataset.
#[derive(Debug, Clone, Copy)]
pub struct SoftmaxObjective<'a> {
    pub features: &'a [FeatureVector],
    pub targets: &'a [usize],
    pub n_classes: usize,
    pub dimension: usize,
    pub l2: f64,
}

impl SoftmaxObjective<'_> {
    fn probabilities(&self, params: &LrParameters, x: &FeatureVector, out: &mut [f64]) {
        for (c, o) in out.iter_mut().enumerate() {
            let row = &params.weights[c * self.dimension..(c + 1) * self.dimension];
            *o = params.bias[c] + x.dot(row);
        }
        softmax_in_place(out);
    }

    fn penalty(&self, params: &LrParameters) -> f64 {
        0.5 * self.l2 * params.weights.iter().map(|w| w * w).sum::<f64>()
    }

    pub fn loss(&self, params: &LrParameters) -> f64 {
        let mut p = vec![0.0; self.n_classes];
        let mut total = 0.0;
        for (x, &y) in self.features.iter().zip(self.targets) {
            self.probabilities(params, x, &mut p);
            total -= p[y].ln();
        }
        total / self.features.len() as f64 + self.penalty(params)
    }

    /// Loss and its analytic gradient.
    pub fn loss_and_gradient(&self, params: &LrParameters) -> (f64, LrParameters) {
        let n = self.features.len() as f64;
        let mut grad = LrParameters::zeros(self.n_classes, self.dimension);
        let mut p = vec![0.0; self.n_classes];
        let mut total = 0.0;
        for (x, &y) in self.features.iter().zip(self.targets) {
            self.probabilities(params, x, &mut p);
            total -= p[y].ln();
            for (c, &pc) in p.iter().enumerate() {
                let residual = (pc - if c == y { 1.0 } else { 0.0 }) / n;
                grad.bias[c] += residual;
                let row = &mut grad.weights[c * self.dimension..(c + 1) * self.dimension];
                for &(col, w) in x.entries() {
                    row[col] += residual * w;
                }
            }
        }
        for (g, w) in grad.weights.iter_mut().zip(&params.weights) {
            *g += self.l2 * w;
        }
        (total / n + self.penalty(params), grad)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrModel {
    classes: Vec<String>,
    hyperparameters: LrHyperparameters,
    parameters: LrParameters,
    /// Training loss before each update.
    loss_history: Vec<f64>,
    vocabulary: Vocabulary,
}

pub fn train_lr<L: ClassLabel>(
    examples: &[LabeledExample<L>],
    classes: &[L],
    vocab: &Vocabulary,
    hyper: LrHyperparameters,
) -> Result<LrModel> {
    if hyper.epochs == 0 {
        return Err(Error::InvalidArgument("epochs must be at least 1".into()));
    }
    if !(hyper.learning_rate > 0.0 && hyper.learning_rate.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "learning rate must be positive, got {}",
            hyper.learning_rate
        )));
    }
    if !(hyper.l2 >= 0.0 && hyper.l2.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "l2 must be non-negative, got {}",
            hyper.l2
        )));
    }
    if examples.is_empty() {
        return Err(Error::InvalidArgument("no training examples".into()));
    }
    let names = class_names(classes)?;
    let targets = examples
        .iter()
        .map(|ex| class_index(&names, ex.label.name()))
        .collect::<Result<Vec<_>>>()?;
    for (c, name) in names.iter().enumerate() {
        if !targets.contains(&c) {
            return Err(Error::EmptyClass(name.clone()));
        }
    }
    let n_docs = vocab.n_docs();
    let features: Vec<FeatureVector> = examples
        .iter()
        .map(|ex| featurize(&ex.tokens, vocab, n_docs))
        .collect();
    let objective = SoftmaxObjective {
        features: &features,
        targets: &targets,
        n_classes: names.len(),
        dimension: vocab.len(),
        l2: hyper.l2,
    };
    let mut params = LrParameters::zeros(names.len(), vocab.len());
    let mut loss_history = Vec::with_capacity(hyper.epochs + 1);
    for epoch in 1..=hyper.epochs {
        let (loss, grad) = objective.loss_and_gradient(&params);
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        loss_history.push(loss);
        for (w, g) in params.weights.iter_mut().zip(&grad.weights) {
            *w -= hyper.learning_rate * g;
        }
        for (b, g) in params.bias.iter_mut().zip(&grad.bias) {
            *b -= hyper.learning_rate * g;
        }
    }
    let final_loss = objective.loss(&params);
    if !final_loss.is_finite() {
        return Err(Error::NonFiniteLoss {
            epoch: hyper.epochs,
        });
    }
    loss_history.push(final_loss);
    Ok(LrModel {
        classes: names,
        hyperparameters: hyper,
        parameters: params,
        loss_history,
        vocabulary: vocab.clone(),
    })
}

impl LrModel {
    /// An untrained model with all-zero parameters.
    pub fn zeros<L: ClassLabel>(
        classes: &[L],
        vocab: &Vocabulary,
        hyper: LrHyperparameters,
    ) -> Result<Self> {
        let names = class_names(classes)?;
        Ok(LrModel {
            parameters: LrParameters::zeros(names.len(), vocab.len()),
            classes: names,
            hyperparameters: hyper,
            loss_history: Vec::new(),
            vocabulary: vocab.clone(),
        })
    }

    pub fn hyperparameters(&self) -> &LrHyperparameters {
        &self.hyperparameters
    }

    pub fn parameters(&self) -> &LrParameters {
        &self.parameters
    }

    /// Loss before each epoch's update, then the final loss.
    pub fn loss_history(&self) -> &[f64] {
        &self.loss_history
    }

    pub fn dimension(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn predict_features(&self, x: &FeatureVector) -> Result<Prediction> {
        let dim = self.dimension();
        if x.dimension() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: x.dimension(),
            });
        }
        let mut logits: Vec<f64> = (0..self.classes.len())
            .map(|c| {
                self.parameters.bias[c] + x.dot(&self.parameters.weights[c * dim..(c + 1) * dim])
            })
            .collect();
        softmax_in_place(&mut logits);
        Ok(Prediction::from_probabilities(&self.classes, logits))
    }

    pub fn featurize(&self, tokens: &TokenSequence) -> FeatureVector {
        featurize(tokens, &self.vocabulary, self.vocabulary.n_docs())
    }
}

impl Classifier for LrModel {
    fn classes(&self) -> &[String] {
        &self.classes
    }

    fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    fn predict_tokens(&self, tokens: &TokenSequence) -> Prediction {
        self.predict_features(&self.featurize(tokens))
            .expect("features come from the model's own vocabulary")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;
    use crate::labeling::Provenance;
    use crate::topics::VocabularyOptions;

    fn toy() -> (Vec<LabeledExample<&'static str>>, Vocabulary) {
        let ex = vec![
            LabeledExample::new("1", tokenize("alpha beta"), "a", Provenance::Gold),
            LabeledExample::new("2", tokenize("gamma delta"), "b", Provenance::Gold),
            LabeledExample::new("3", tokenize("alpha alpha"), "a", Provenance::Gold),
        ];
        let docs: Vec<_> = ex.iter().map(|e| e.tokens.clone()).collect();
        let v = Vocabulary::build(&docs, &VocabularyOptions::new(1, 1, 1)).unwrap();
        (ex, v)
    }

    #[test]
    fn zero_model_is_uniform() {
        let (_, v) = toy();
        let m = LrModel::zeros(&["a", "b"], &v, LrHyperparameters::default()).unwrap();
        let p = m.predict_tokens(&TokenSequence::default());
        assert_eq!(p.class, 0);
        assert!((p.probabilities[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn learns_toy_set_and_loss_decreases() {
        let (ex, v) = toy();
        let hyper = LrHyperparameters {
            learning_rate: 0.1,
            l2: 0.0,
            epochs: 50,
            seed: 1,
        };
        let m = train_lr(&ex, &["a", "b"], &v, hyper).unwrap();
        for w in m.loss_history().windows(2) {
            assert!(w[1] <= w[0]);
        }
        for e in &ex {
            assert_eq!(m.predict_tokens(&e.tokens).label, e.label);
        }
    }

    #[test]
    fn diverging_training_reports_epoch() {
        let (ex, v) = toy();
        let hyper = LrHyperparameters {
            learning_rate: 1e300,
            l2: 1.0,
            epochs: 10,
            seed: 0,
        };
        match train_lr(&ex, &["a", "b"], &v, hyper) {
            Err(Error::NonFiniteLoss { epoch }) => assert!(epoch >= 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_hyperparameters_and_dimensions() {
        let (ex, v) = toy();
        let zero_epochs = LrHyperparameters {
            epochs: 0,
            ..Default::default()
        };
        assert!(train_lr(&ex, &["a", "b"], &v, zero_epochs).is_err());
        let bad_lr = LrHyperparameters {
            learning_rate: 0.0,
            ..Default::default()
        };
        assert!(train_lr(&ex, &["a", "b"], &v, bad_lr).is_err());
        let m = LrModel::zeros(&["a", "b"], &v, LrHyperparameters::default()).unwrap();
        assert!(matches!(
            m.predict_features(&FeatureVector::empty(99)),
            Err(Error::DimensionMismatch { expected, found: 99 }) if expected == v.len()
        ));
    }
}
