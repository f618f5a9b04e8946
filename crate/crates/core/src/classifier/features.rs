use serde::{Deserialize, Serialize};

use crate::corpus::TokenSequence;
use crate::topics::{idf, Vocabulary};

/// Sparse TF-IDF vector. Entries are sorted by column and never zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    entries: Vec<(usize, f64)>,
    dimension: usize,
}

impl FeatureVector {
    /// Sorts, merges duplicate columns and drops zeros. Panics if a column is
    /// out of range.
    pub fn new(mut entries: Vec<(usize, f64)>, dimension: usize) -> Self {
        entries.sort_by_key(|&(c, _)| c);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (c, w) in entries {
            assert!(
                c < dimension,
                "column {c} out of range for dimension {dimension}"
            );
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += w,
                _ => merged.push((c, w)),
            }
        }
        merged.retain(|&(_, w)| w != 0.0);
        FeatureVector {
            entries: merged,
            dimension,
        }
    }

    pub fn empty(dimension: usize) -> Self {
        FeatureVector {
            entries: Vec::new(),
            dimension,
        }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, column: usize) -> f64 {
        self.entries
            .binary_search_by_key(&column, |&(c, _)| c)
            .map_or(0.0, |i| self.entries[i].1)
    }

    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(c, w)| w * dense[c]).sum()
    }
}

/// TF-IDF weights of every in-vocabulary n-gram of `tokens`; `n_docs` is the
/// document count used for idf.
pub fn featurize(tokens: &TokenSequence, vocab: &Vocabulary, n_docs: usize) -> FeatureVector {
    let df = vocab.doc_freqs();
    let entries = vocab
        .term_counts(tokens)
        .into_iter()
        .map(|(col, tf)| (col, f64::from(tf) * idf(df[col], n_docs)))
        .collect();
    FeatureVector {
        entries,
        dimension: vocab.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;
    use crate::topics::VocabularyOptions;

    fn vocab() -> Vocabulary {
        let docs = [tokenize("heroin withdrawal"), tokenize("kratom withdrawal")];
        Vocabulary::build(&docs, &VocabularyOptions::new(1, 1, 1)).unwrap()
    }

    #[test]
    fn single_known_term() {
        let v = vocab();
        let fv = featurize(&tokenize("withdrawal"), &v, 2);
        assert_eq!(fv.entries(), [(2, 1.0)]);
        assert_eq!(fv.dimension(), 3);
    }

    #[test]
    fn empty_and_oov_inputs() {
        let v = vocab();
        assert!(featurize(&TokenSequence::default(), &v, 2).is_empty());
        assert!(featurize(&tokenize("cocaine xanax"), &v, 2).is_empty());
    }

    #[test]
    fn constructor_merges_and_drops_zeros() {
        let fv = FeatureVector::new(vec![(2, 1.0), (0, 0.0), (2, 0.5), (1, -1.0)], 3);
        assert_eq!(fv.entries(), [(1, -1.0), (2, 1.5)]);
        assert_eq!(fv.get(0), 0.0);
        assert_eq!(fv.dot(&[1.0, 2.0, 3.0]), 2.5);
    }
}
