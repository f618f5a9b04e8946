//! Multinomial naive Bayes over raw n-gram counts with additive smoothing.

use serde::{Deserialize, Serialize};

use super::{class_index, class_names, softmax_in_place, Classifier, Prediction};
use crate::corpus::TokenSequence;
use crate::error::{Error, Result};
use crate::labeling::{ClassLabel, LabeledExample};
use crate::topics::Vocabulary;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    classes: Vec<String>,
    alpha: f64,
    /// ln P(class).
    log_priors: Vec<f64>,
    /// ln P(term | class), one row per class.
    log_likelihoods: Vec<Vec<f64>>,
    vocabulary: Vocabulary,
}

/// Fits class priors and smoothed term likelihoods
/// `(count(t, c) + alpha) / (Σ_t count(t, c) + alpha·|V|)`.
pub fn train_nb<L: ClassLabel>(
    examples: &[LabeledExample<L>],
    classes: &[L],
    vocab: &Vocabulary,
    alpha: f64,
) -> Result<NbModel> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "smoothing alpha must be positive, got {alpha}"
        )));
    }
    if vocab.is_empty() {
        return Err(Error::InvalidArgument("vocabulary is empty".into()));
    }
    let names = class_names(classes)?;
    let dim = vocab.len();
    let mut doc_counts = vec![0usize; names.len()];
    let mut term_counts = vec![vec![0u64; dim]; names.len()];
    for ex in examples {
        let c = class_index(&names, ex.label.name())?;
        doc_counts[c] += 1;
        for (col, n) in vocab.term_counts(&ex.tokens) {
            term_counts[c][col] += u64::from(n);
        }
    }
    if let Some(c) = doc_counts.iter().position(|&n| n == 0) {
        return Err(Error::EmptyClass(names[c].clone()));
    }
    let total = examples.len() as f64;
    let log_priors = doc_counts
        .iter()
        .map(|&n| (n as f64 / total).ln())
        .collect();
    let log_likelihoods = term_counts
        .iter()
        .map(|row| {
            let row_total: u64 = row.iter().sum();
            let denom = (row_total as f64 + alpha * dim as f64).ln();
            row.iter()
                .map(|&n| (n as f64 + alpha).ln() - denom)
                .collect()
        })
        .collect();
    Ok(NbModel {
        classes: names,
        alpha,
        log_priors,
        log_likelihoods,
        vocabulary: vocab.clone(),
    })
}

impl NbModel {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn prior(&self, class: usize) -> f64 {
        self.log_priors[class].exp()
    }

    /// P(term | class) in probability space.
    pub fn likelihood(&self, term: &str, class: usize) -> Option<f64> {
        self.vocabulary
            .column(term)
            .map(|col| self.log_likelihoods[class][col].exp())
    }

    pub fn log_likelihoods(&self, class: usize) -> &[f64] {
        &self.log_likelihoods[class]
    }

    /// Posterior over classes from `(column, count)` pairs.
    pub fn predict_counts(&self, counts: &[(usize, u32)]) -> Result<Prediction> {
        let dim = self.vocabulary.len();
        if let Some(&(col, _)) = counts.iter().find(|&&(c, _)| c >= dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: col + 1,
            });
        }
        let mut scores: Vec<f64> = self
            .log_priors
            .iter()
            .zip(&self.log_likelihoods)
            .map(|(&prior, row)| {
                prior
                    + counts
                        .iter()
                        .map(|&(c, n)| f64::from(n) * row[c])
                        .sum::<f64>()
            })
            .collect();
        softmax_in_place(&mut scores);
        Ok(Prediction::from_probabilities(&self.classes, scores))
    }
}

impl Classifier for NbModel {
    fn classes(&self) -> &[String] {
        &self.classes
    }

    fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    fn predict_tokens(&self, tokens: &TokenSequence) -> Prediction {
        self.predict_counts(&self.vocabulary.term_counts(tokens))
            .expect("counts come from the model's own vocabulary")
    }
}
