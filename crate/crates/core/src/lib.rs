//! Opioid-related text analytics for cryptomarket listings and social media.
//!
//! The library covers listing parsing, ontology-backed drug entity
//! recognition, TF-IDF topic extraction, lexicon and hashtag weak labeling,
//! naive Bayes and softmax regression classifiers, and per-category reports.
//! [`pipeline`] wires the stages together behind the `opioid-lens` binary.

pub mod classifier;
pub mod config;
pub mod corpus;
pub mod error;
pub mod labeling;
pub mod listing;
pub mod ner;
pub mod ontology;
pub mod pipeline;
pub mod report;
pub mod synth;
pub mod topics;

pub use corpus::{tokenize, Corpus, Post, Source, TokenSequence};
pub use error::{Error, Result};
pub use labeling::{EmotionLabel, SentimentLabel};
pub use ontology::{DrugCategory, Ontology};
