use std::collections::HashSet;

use opioid_lens::corpus::write_posts_jsonl;
use opioid_lens::labeling::HashtagMap;
use opioid_lens::pipeline::emotion_examples;
use opioid_lens::synth::{generate, SyntheticConfig};
use opioid_lens::{Ontology, Source};

const POSTS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixtures/posts.jsonl");

#[test]
fn bundled_corpus_matches_generator() {
    let synth = generate(
        &SyntheticConfig::default(),
        &Ontology::bundled(),
        &HashtagMap::bundled(),
    );
    let mut buf = Vec::new();
    write_posts_jsonl(&synth.corpus, &mut buf).unwrap();
    let bundled = std::fs::read(POSTS).unwrap();
    assert!(
        buf == bundled,
        "posts.jsonl is stale; rerun `cargo run --example generate_fixtures`"
    );
}

#[test]
fn generator_shape() {
    let cfg = SyntheticConfig::default();
    let synth = generate(&cfg, &Ontology::bundled(), &HashtagMap::bundled());
    let reddit = synth
        .corpus
        .posts
        .iter()
        .filter(|p| p.source == Source::Reddit)
        .count();
    let tweets = synth
        .corpus
        .posts
        .iter()
        .filter(|p| p.source == Source::Twitter)
        .count();
    assert_eq!((reddit, tweets), (cfg.reddit_posts, cfg.tweets));
    assert!(!synth.conflict_ids.is_empty());

    let (labeled, discarded) = emotion_examples(&synth.corpus, &HashtagMap::bundled());
    assert_eq!(discarded, synth.conflict_ids.len());
    let kept: HashSet<&str> = labeled.iter().map(|(e, _)| e.id.as_str()).collect();
    assert!(synth
        .conflict_ids
        .iter()
        .all(|id| !kept.contains(id.as_str())));
}

#[test]
fn other_seeds_differ() {
    let a = generate(
        &SyntheticConfig::default(),
        &Ontology::bundled(),
        &HashtagMap::bundled(),
    );
    let cfg = SyntheticConfig {
        seed: 1,
        ..Default::default()
    };
    let b = generate(&cfg, &Ontology::bundled(), &HashtagMap::bundled());
    assert_ne!(a.corpus.posts, b.corpus.posts);
}
