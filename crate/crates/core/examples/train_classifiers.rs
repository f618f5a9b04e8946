//! Trains naive Bayes and softmax regression on the weak labels of the
//! bundled corpus and prints held-out metrics.
//!
//!     cargo run --release --example train_classifiers

use opioid_lens::classifier::evaluate;
use opioid_lens::config::{ModelKind, Overrides, PipelineConfig};
use opioid_lens::corpus::{load_posts, PostFormat};
use opioid_lens::labeling::{HashtagMap, PolarityLexicon};
use opioid_lens::pipeline::{emotion_examples, fit, sentiment_examples};
use opioid_lens::{EmotionLabel, SentimentLabel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixtures/pipeline.toml");
    let corpus = load_posts(
        concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixtures/posts.jsonl"),
        PostFormat::Jsonl,
    )?;
    let sentiment = sentiment_examples(&corpus, &PolarityLexicon::bundled())?;
    let (emotion, conflicts) = emotion_examples(&corpus, &HashtagMap::bundled());
    let emotion: Vec<_> = emotion.into_iter().map(|(e, _)| e).collect();
    println!(
        "{} sentiment examples, {} emotion examples, {conflicts} conflicting tweets dropped",
        sentiment.len(),
        emotion.len()
    );

    for model in [ModelKind::Nb, ModelKind::Lr] {
        let cfg = PipelineConfig::load(
            config,
            &Overrides {
                model: Some(model),
                ..Default::default()
            },
        )?;
        let fitted = fit(&SentimentLabel::ALL, &sentiment, &cfg)?;
        println!(
            "\n== sentiment, {model:?} ({} train / {} test)",
            fitted.train.len(),
            fitted.test.len()
        );
        print!("{}", evaluate(&fitted.model, &fitted.test)?.summary());
        let fitted = fit(&EmotionLabel::ALL, &emotion, &cfg)?;
        println!(
            "\n== emotion, {model:?} ({} train / {} test)",
            fitted.train.len(),
            fitted.test.len()
        );
        print!("{}", evaluate(&fitted.model, &fitted.test)?.summary());
    }
    Ok(())
}
