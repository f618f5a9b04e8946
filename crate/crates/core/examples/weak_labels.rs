//! Lexicon sentiment scores and hashtag emotion labels.
//!
//!     cargo run --example weak_labels

use opioid_lens::labeling::{
    emotion_label, polarity_score, sentiment_label, HashtagMap, PolarityLexicon,
};
use opioid_lens::{Post, Source};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lexicon = PolarityLexicon::bundled();
    for text in [
        "love this community, feeling great",
        "not good, withdrawal is awful",
        "taper schedule posted in the sidebar",
        "never felt better than today",
    ] {
        let score = polarity_score(text, &lexicon);
        println!(
            "{score:+.3} {:<8} {text}",
            sentiment_label(score)?.to_string()
        );
    }
    println!();

    let hashtags = HashtagMap::bundled();
    for text in [
        "first week off kratom #blessed #grateful",
        "lost another friend to fentanyl #sad",
        "clean today #happy but scared of relapse #fear",
        "oxy prices again",
    ] {
        let post = Post::new("t", Source::Twitter, "", text);
        match emotion_label(&post, &hashtags) {
            Some((emotion, cleaned)) => println!("{emotion:<12} {cleaned:?}"),
            None => println!("{:<12} {text:?}", "(no label)"),
        }
    }
    Ok(())
}
