//! Top TF-IDF n-grams per subreddit in the bundled synthetic corpus.
//!
//!     cargo run --example topics -- [K]

use std::collections::BTreeMap;

use opioid_lens::corpus::{load_posts, PostFormat};
use opioid_lens::topics::{top_terms, Stopwords, Vocabulary, VocabularyOptions};
use opioid_lens::{Source, TokenSequence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(8);
    let corpus = load_posts(
        concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixtures/posts.jsonl"),
        PostFormat::Jsonl,
    )?;

    let mut by_collection: BTreeMap<&str, Vec<TokenSequence>> = BTreeMap::new();
    for post in corpus.posts.iter().filter(|p| p.source == Source::Reddit) {
        by_collection
            .entry(&post.collection)
            .or_default()
            .push(post.tokens());
    }
    let options = VocabularyOptions::new(1, 3, 2).with_stopwords(Stopwords::english());
    for (collection, docs) in &by_collection {
        let vocab = Vocabulary::build(docs, &options)?;
        println!(
            "r/{collection} ({} posts, {} terms)",
            docs.len(),
            vocab.len()
        );
        for (rank, t) in top_terms(docs, &vocab, k).iter().enumerate() {
            println!("  {:>2}. {:<28} {:.3}", rank + 1, t.term, t.score);
        }
    }
    Ok(())
}
