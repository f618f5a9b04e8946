//! Gazetteer entity recognition and drug categories for a few posts.
//!
//!     cargo run --example recognize_entities -- "any text to scan"

use opioid_lens::ner::{categorize, recognize};
use opioid_lens::{Ontology, Post, Source};

fn main() {
    let ontology = Ontology::bundled();
    let texts: Vec<String> = match std::env::args().nth(1) {
        Some(t) => vec![t],
        None => vec![
            "Dope sick again, the black tar heroin around here is cut with fentanyl".into(),
            "Switched from oxycontin to kratom tea, two weeks clean".into(),
            "Anyone tried china white? Or is it just pressed M30s".into(),
        ],
    };
    for (i, text) in texts.iter().enumerate() {
        println!("{text}");
        for m in recognize(text, &ontology) {
            println!(
                "  [{}..{}] {:?} -> {} ({})",
                m.char_span.0,
                m.char_span.1,
                &text[m.char_span.0..m.char_span.1],
                m.canonical,
                m.category
            );
        }
        let post = Post::new(format!("{i}"), Source::Reddit, "", text.as_str());
        let cats: Vec<String> = categorize(&post, &ontology)
            .iter()
            .map(|c| c.to_string())
            .collect();
        println!("  categories: {}", cats.join(", "));
    }
}
