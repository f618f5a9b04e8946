//! N-gram vocabularies and TF-IDF topic ranking.
//!
//! Weights use raw term counts and the smoothed inverse document frequency
//! `ln((1 + N) / (1 + df)) + 1`, so a term present in every document keeps
//! weight 1 instead of vanishing. A term's corpus-level score is the sum of its
//! per-document scores.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, TokenSequence};
use crate::error::{Error, Result};

const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// Words dropped from the unigram vocabulary. Longer n-grams keep them, so
/// phrases such as "cold turkey withdrawal" or "tango and cash" survive.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn none() -> Self {
        Stopwords::default()
    }

    /// English function words shipped with the crate.
    pub fn english() -> Self {
        Self::parse(BUNDLED_STOPWORDS)
    }

    /// One word per line; `#` starts a comment line.
    pub fn parse(text: &str) -> Self {
        Stopwords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct VocabularyOptions {
    pub n_min: usize,
    pub n_max: usize,
    pub min_df: usize,
    pub stopwords: Stopwords,
}

impl VocabularyOptions {
    pub fn new(n_min: usize, n_max: usize, min_df: usize) -> Self {
        VocabularyOptions {
            n_min,
            n_max,
            min_df,
            stopwords: Stopwords::none(),
        }
    }

    pub fn with_stopwords(mut self, stopwords: Stopwords) -> Self {
        self.stopwords = stopwords;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(1 <= self.n_min && self.n_min <= self.n_max && self.n_max <= 3) {
            return Err(Error::InvalidArgument(format!(
                "n-gram range {}..={} must satisfy 1 <= n_min <= n_max <= 3",
                self.n_min, self.n_max
            )));
        }
        if self.min_df == 0 {
            return Err(Error::InvalidArgument("min_df must be at least 1".into()));
        }
        Ok(())
    }
}

/// Calls `f` with every n-gram of `tokens` for n in `n_min..=n_max`, skipping
/// stopword unigrams.
fn for_each_ngram(
    tokens: &[String],
    n_min: usize,
    n_max: usize,
    stopwords: &Stopwords,
    mut f: impl FnMut(&str),
) {
    let mut buf = String::new();
    for n in n_min..=n_max {
        for window in tokens.windows(n) {
            if n == 1 && stopwords.contains(&window[0]) {
                continue;
            }
            buf.clear();
            for (i, t) in window.iter().enumerate() {
                if i > 0 {
                    buf.push(' ');
                }
                buf.push_str(t);
            }
            f(&buf);
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct VocabularyData {
    n_min: usize,
    n_max: usize,
    n_docs: usize,
    stopwords: Vec<String>,
    terms: Vec<String>,
    doc_freq: Vec<usize>,
}

/// Sorted n-gram vocabulary with document frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "VocabularyData", into = "VocabularyData")]
pub struct Vocabulary {
    n_min: usize,
    n_max: usize,
    n_docs: usize,
    stopwords: Stopwords,
    terms: Vec<String>,
    doc_freq: Vec<usize>,
    index: HashMap<String, usize>,
}

impl From<VocabularyData> for Vocabulary {
    fn from(d: VocabularyData) -> Self {
        let index = d
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocabulary {
            n_min: d.n_min,
            n_max: d.n_max,
            n_docs: d.n_docs,
            stopwords: Stopwords(d.stopwords.into_iter().collect()),
            terms: d.terms,
            doc_freq: d.doc_freq,
            index,
        }
    }
}

impl From<Vocabulary> for VocabularyData {
    fn from(v: Vocabulary) -> Self {
        let mut stopwords: Vec<String> = v.stopwords.0.into_iter().collect();
        stopwords.sort();
        VocabularyData {
            n_min: v.n_min,
            n_max: v.n_max,
            n_docs: v.n_docs,
            stopwords,
            terms: v.terms,
            doc_freq: v.doc_freq,
        }
    }
}

/// Smoothed inverse document frequency.
pub fn idf(doc_freq: usize, n_docs: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + doc_freq as f64)).ln() + 1.0
}

impl Vocabulary {
    /// Collects every n-gram that occurs in at least `min_df` documents.
    /// N-grams never span two documents.
    pub fn build(docs: &[TokenSequence], options: &VocabularyOptions) -> Result<Self> {
        options.validate()?;
        if docs.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot build a vocabulary from an empty corpus".into(),
            ));
        }
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        let mut seen: HashSet<String> = HashSet::new();
        for doc in docs {
            seen.clear();
            for_each_ngram(
                &doc.tokens,
                options.n_min,
                options.n_max,
                &options.stopwords,
                |g| {
                    if !seen.contains(g) {
                        seen.insert(g.to_owned());
                    }
                },
            );
            for g in seen.drain() {
                *df.entry(g).or_insert(0) += 1;
            }
        }
        let (terms, doc_freq): (Vec<_>, Vec<_>) =
            df.into_iter().filter(|&(_, c)| c >= options.min_df).unzip();
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t): (usize, &String)| (t.clone(), i))
            .collect();
        Ok(Vocabulary {
            n_min: options.n_min,
            n_max: options.n_max,
            n_docs: docs.len(),
            stopwords: options.stopwords.clone(),
            terms,
            doc_freq,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freqs(&self) -> &[usize] {
        &self.doc_freq
    }

    /// Number of documents the vocabulary was built from.
    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn ngram_range(&self) -> (usize, usize) {
        (self.n_min, self.n_max)
    }

    pub fn column(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, column: usize) -> &str {
        &self.terms[column]
    }

    pub fn doc_freq(&self, term: &str) -> Option<usize> {
        self.column(term).map(|c| self.doc_freq[c])
    }

    /// In-vocabulary n-gram counts of one document, sorted by column.
    pub fn term_counts(&self, doc: &TokenSequence) -> Vec<(usize, u32)> {
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for_each_ngram(&doc.tokens, self.n_min, self.n_max, &self.stopwords, |g| {
            if let Some(&c) = self.index.get(g) {
                *counts.entry(c).or_insert(0) += 1;
            }
        });
        counts.into_iter().collect()
    }

    /// SHA-256 over the terms and document frequencies, hex encoded.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(format!("{}:{}:{}\n", self.n_min, self.n_max, self.n_docs));
        for (t, df) in self.terms.iter().zip(&self.doc_freq) {
            h.update(t.as_bytes());
            h.update(format!("\t{df}\n"));
        }
        hex::encode(h.finalize())
    }
}

/// Convenience wrapper over [`Vocabulary::build`] without stopwords.
pub fn build_vocabulary(
    corpus: &Corpus,
    n_min: usize,
    n_max: usize,
    min_df: usize,
) -> Result<Vocabulary> {
    Vocabulary::build(
        &corpus.token_sequences(),
        &VocabularyOptions::new(n_min, n_max, min_df),
    )
}

/// `tf * idf` of one term in one document, with `tf` the raw count.
pub fn tfidf_score(
    term: &str,
    document: &TokenSequence,
    vocab: &Vocabulary,
    n_docs: usize,
) -> Result<f64> {
    let column = vocab
        .column(term)
        .ok_or_else(|| Error::UnknownTerm(term.to_owned()))?;
    let n = term.split(' ').count();
    let target: Vec<&str> = term.split(' ').collect();
    let tf = document
        .tokens
        .windows(n)
        .filter(|w| w.iter().map(String::as_str).eq(target.iter().copied()))
        .count();
    if tf == 0 {
        return Ok(0.0);
    }
    Ok(tf as f64 * idf(vocab.doc_freq[column], n_docs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermScore {
    pub term: String,
    pub score: f64,
}

/// Ranks vocabulary terms by summed TF-IDF over `docs`. Ties break
/// lexicographically ascending.
pub fn top_terms(docs: &[TokenSequence], vocab: &Vocabulary, k: usize) -> Vec<TermScore> {
    let n_docs = docs.len();
    let mut totals = vec![0u64; vocab.len()];
    for doc in docs {
        for (col, count) in vocab.term_counts(doc) {
            totals[col] += u64::from(count);
        }
    }
    // Σ_d tf_d · idf, computed as idf · Σ_d tf_d.
    let mut scored: Vec<TermScore> = totals
        .iter()
        .enumerate()
        .filter(|&(_, &tf)| tf > 0)
        .map(|(col, &tf)| TermScore {
            term: vocab.terms[col].clone(),
            score: tf as f64 * idf(vocab.doc_freq[col], n_docs),
        })
        .collect();
    scored.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.term.cmp(&b.term))
    });
    scored.truncate(k);
    scored
}
