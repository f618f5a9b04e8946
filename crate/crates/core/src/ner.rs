//! Gazetteer entity recognition: greedy leftmost-longest matching of ontology
//! aliases over the token stream.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::corpus::{tokenize, Post, TokenSequence};
use crate::ontology::{DrugCategory, Ontology};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntityMention {
    /// Normalized alias as stored in the ontology.
    pub alias_matched: String,
    pub canonical: String,
    pub category: DrugCategory,
    /// Half-open token range.
    pub token_span: (usize, usize),
    /// Byte range in the source text.
    pub char_span: (usize, usize),
}

/// Finds non-overlapping alias mentions in text order.
pub fn recognize(text: &str, ontology: &Ontology) -> Vec<EntityMention> {
    recognize_tokens(&tokenize(text), ontology)
}

pub fn recognize_tokens(seq: &TokenSequence, ontology: &Ontology) -> Vec<EntityMention> {
    let mut mentions = Vec::new();
    let max_len = ontology.max_alias_tokens();
    let n = seq.len();
    let mut pos = 0;
    let mut key = String::new();
    while pos < n {
        let longest = max_len.min(n - pos);
        let hit = (1..=longest).rev().find_map(|len| {
            key.clear();
            for (i, tok) in seq.tokens[pos..pos + len].iter().enumerate() {
                if i > 0 {
                    key.push(' ');
                }
                key.push_str(tok);
            }
            ontology.entry_for_alias(&key).map(|entry| (len, entry))
        });
        match hit {
            Some((len, entry)) => {
                mentions.push(EntityMention {
                    alias_matched: seq.tokens[pos..pos + len].join(" "),
                    canonical: entry.canonical.clone(),
                    category: entry.supercategory,
                    token_span: (pos, pos + len),
                    char_span: (seq.spans[pos].0, seq.spans[pos + len - 1].1),
                });
                pos += len;
            }
            None => pos += 1,
        }
    }
    mentions
}

/// Every category mentioned in the post (multi-label).
pub fn categorize(post: &Post, ontology: &Ontology) -> BTreeSet<DrugCategory> {
    recognize(&post.text, ontology)
        .into_iter()
        .map(|m| m.category)
        .collect()
}

/// Category of the first mention, if any.
pub fn first_category(post: &Post, ontology: &Ontology) -> Option<DrugCategory> {
    recognize(&post.text, ontology).first().map(|m| m.category)
}

/// One line of the mentions JSONL output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MentionRecord<'a> {
    pub post_id: &'a str,
    pub alias: &'a str,
    pub canonical: &'a str,
    pub category: &'static str,
    pub start: usize,
    pub end: usize,
}

impl<'a> MentionRecord<'a> {
    pub fn new(post_id: &'a str, mention: &'a EntityMention) -> Self {
        MentionRecord {
            post_id,
            alias: &mention.alias_matched,
            canonical: &mention.canonical,
            category: mention.category.display_name(),
            start: mention.char_span.0,
            end: mention.char_span.1,
        }
    }
}
