//! Text classifiers trained on weak labels, and their evaluation.
//!
//! Naive Bayes consumes raw n-gram counts; softmax regression consumes
//! TF-IDF weighted features. Both predict a full distribution over the
//! declared classes, with ties resolved in declaration order.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

mod features;
mod lr;
mod metrics;
mod nb;
mod split;

pub use features::{featurize, FeatureVector};
pub use lr::{train_lr, LrHyperparameters, LrModel, LrParameters, SoftmaxObjective};
pub use metrics::{evaluate, ClassMetrics, ConfusionMatrix, Metrics};
pub use nb::{train_nb, NbModel};
pub use split::stratified_split;

use crate::corpus::TokenSequence;
use crate::error::{Error, Result};
use crate::labeling::ClassLabel;
use crate::topics::Vocabulary;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub class: usize,
    pub label: String,
    pub probabilities: Vec<f64>,
}

impl Prediction {
    fn from_probabilities(classes: &[String], probabilities: Vec<f64>) -> Self {
        let mut best = 0;
        for (i, &p) in probabilities.iter().enumerate() {
            if p > probabilities[best] {
                best = i;
            }
        }
        Prediction {
            class: best,
            label: classes[best].clone(),
            probabilities,
        }
    }
}

pub trait Classifier {
    fn classes(&self) -> &[String];
    fn vocabulary(&self) -> &Vocabulary;
    fn predict_tokens(&self, tokens: &TokenSequence) -> Prediction;
}

fn softmax_in_place(scores: &mut [f64]) {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for s in scores.iter_mut() {
        *s = (*s - max).exp();
        sum += *s;
    }
    for s in scores.iter_mut() {
        *s /= sum;
    }
}

fn class_names<L: ClassLabel>(classes: &[L]) -> Result<Vec<String>> {
    let names: Vec<String> = classes.iter().map(|c| c.name().to_owned()).collect();
    if names.is_empty() {
        return Err(Error::InvalidArgument("no classes declared".into()));
    }
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::InvalidArgument(format!(
                "class `{n}` declared twice"
            )));
        }
    }
    Ok(names)
}

fn class_index(names: &[String], label: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == label)
        .ok_or_else(|| Error::UndeclaredClass(label.to_owned()))
}

/// Either trained model, as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    NaiveBayes(NbModel),
    SoftmaxRegression(LrModel),
}

impl Classifier for Model {
    fn classes(&self) -> &[String] {
        match self {
            Model::NaiveBayes(m) => m.classes(),
            Model::SoftmaxRegression(m) => m.classes(),
        }
    }

    fn vocabulary(&self) -> &Vocabulary {
        match self {
            Model::NaiveBayes(m) => m.vocabulary(),
            Model::SoftmaxRegression(m) => m.vocabulary(),
        }
    }

    fn predict_tokens(&self, tokens: &TokenSequence) -> Prediction {
        match self {
            Model::NaiveBayes(m) => m.predict_tokens(tokens),
            Model::SoftmaxRegression(m) => m.predict_tokens(tokens),
        }
    }
}

pub const MODEL_FORMAT: &str = "opioid-lens-model";
pub const MODEL_VERSION: u32 = 1;

/// Versioned JSON container for a trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub vocabulary_hash: String,
    pub classes: Vec<String>,
    /// Seed of the run that produced the model.
    pub seed: u64,
    pub model: Model,
}

impl ModelFile {
    pub fn new(model: Model, seed: u64) -> Self {
        ModelFile {
            format: MODEL_FORMAT.to_owned(),
            version: MODEL_VERSION,
            vocabulary_hash: model.vocabulary().fingerprint(),
            classes: model.classes().to_vec(),
            seed,
            model,
        }
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// Reads and checks format, version and vocabulary hash.
    pub fn read<R: Read>(input: R, source_name: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_reader(input).map_err(|e| {
            Error::parse(
                source_name,
                e.line(),
                None,
                format!("invalid model file: {e}"),
            )
        })?;
        let fail = |field: &str, msg: String| Err(Error::parse(source_name, 1, Some(field), msg));
        if file.format != MODEL_FORMAT {
            return fail(
                "format",
                format!("expected `{MODEL_FORMAT}`, found `{}`", file.format),
            );
        }
        if file.version != MODEL_VERSION {
            return fail("version", format!("unsupported version {}", file.version));
        }
        if file.vocabulary_hash != file.model.vocabulary().fingerprint() {
            return fail(
                "vocabulary_hash",
                "does not match the stored vocabulary".into(),
            );
        }
        if file.classes != file.model.classes() {
            return fail("classes", "do not match the stored model".into());
        }
        Ok(file)
    }
}
