use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{class_index, Classifier};
use crate::error::{Error, Result};
use crate::labeling::{ClassLabel, LabeledExample};

/// Gold (rows) × predicted (columns) counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(classes: Vec<String>) -> Self {
        let n = classes.len();
        ConfusionMatrix {
            classes,
            counts: vec![vec![0; n]; n],
        }
    }

    /// Panics if `counts` is not square or does not match `classes`.
    pub fn from_counts(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Self {
        assert_eq!(classes.len(), counts.len());
        assert!(counts.iter().all(|r| r.len() == classes.len()));
        ConfusionMatrix { classes, counts }
    }

    pub fn record(&mut self, gold: usize, predicted: usize) {
        self.counts[gold][predicted] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// `gold\predicted,<class>...` header then one row per gold class.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gold\\predicted");
        for c in &self.classes {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (c, row) in self.classes.iter().zip(&self.counts) {
            out.push_str(c);
            for n in row {
                let _ = write!(out, ",{n}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub confusion: ConfusionMatrix,
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub accuracy: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl Metrics {
    /// Precision and recall with a zero denominator count as 0; macro scores
    /// are unweighted means over classes.
    pub fn from_confusion(confusion: ConfusionMatrix) -> Self {
        let n = confusion.classes.len();
        let per_class: Vec<ClassMetrics> = (0..n)
            .map(|c| {
                let tp = confusion.counts[c][c];
                let predicted: u64 = (0..n).map(|g| confusion.counts[g][c]).sum();
                let support: u64 = confusion.counts[c].iter().sum();
                let precision = ratio(tp, predicted);
                let recall = ratio(tp, support);
                let f1 = if precision + recall == 0.0 {
                    0.0
                } else {
                    2.0 * precision * recall / (precision + recall)
                };
                ClassMetrics {
                    class: confusion.classes[c].clone(),
                    precision,
                    recall,
                    f1,
                    support,
                }
            })
            .collect();
        let mean = |f: fn(&ClassMetrics) -> f64| {
            if n == 0 {
                0.0
            } else {
                per_class.iter().map(f).sum::<f64>() / n as f64
            }
        };
        let correct: u64 = (0..n).map(|c| confusion.counts[c][c]).sum();
        Metrics {
            macro_precision: mean(|m| m.precision),
            macro_recall: mean(|m| m.recall),
            macro_f1: mean(|m| m.f1),
            accuracy: ratio(correct, confusion.total()),
            per_class,
            confusion,
        }
    }

    /// Fixed-width table with three decimals.
    pub fn summary(&self) -> String {
        let width = self
            .per_class
            .iter()
            .map(|m| m.class.len())
            .max()
            .unwrap_or(0)
            .max(8);
        let mut out = format!(
            "{:<width$}  {:>5}  {:>5}  {:>5}  {:>7}\n",
            "class", "P", "R", "F1", "support"
        );
        for m in &self.per_class {
            let _ = writeln!(
                out,
                "{:<width$}  {:.3}  {:.3}  {:.3}  {:>7}",
                m.class, m.precision, m.recall, m.f1, m.support
            );
        }
        let _ = writeln!(
            out,
            "{:<width$}  {:.3}  {:.3}  {:.3}  {:>7}",
            "macro",
            self.macro_precision,
            self.macro_recall,
            self.macro_f1,
            self.confusion.total()
        );
        let _ = writeln!(out, "accuracy {:.3}", self.accuracy);
        out
    }
}

/// Predicts every test example and tallies the confusion matrix over the
/// model's classes.
pub fn evaluate<M: Classifier + ?Sized, L: ClassLabel>(
    model: &M,
    test: &[LabeledExample<L>],
) -> Result<Metrics> {
    if test.is_empty() {
        return Err(Error::InvalidArgument("test set is empty".into()));
    }
    let mut confusion = ConfusionMatrix::new(model.classes().to_vec());
    for ex in test {
        let gold = class_index(model.classes(), ex.label.name())?;
        let predicted = model.predict_tokens(&ex.tokens).class;
        confusion.record(gold, predicted);
    }
    Ok(Metrics::from_confusion(confusion))
}
