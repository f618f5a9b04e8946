//! Regenerates the bundled synthetic corpus.
//!
//!     cargo run --example generate_fixtures -- [OUT]
//!
//! OUT defaults to `data/fixtures/posts.jsonl` inside the crate.

use std::path::PathBuf;

use opioid_lens::labeling::HashtagMap;
use opioid_lens::pipeline::write_corpus_file;
use opioid_lens::synth::{generate, SyntheticConfig};
use opioid_lens::Ontology;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixtures/posts.jsonl")
        });
    let cfg = SyntheticConfig::default();
    let synth = generate(&cfg, &Ontology::bundled(), &HashtagMap::bundled());
    write_corpus_file(&synth.corpus, &out)?;
    println!(
        "wrote {} posts ({} tweets, {} with conflicting emotion hashtags) to {}",
        synth.corpus.len(),
        cfg.tweets,
        synth.conflict_ids.len(),
        out.display()
    );
    Ok(())
}
