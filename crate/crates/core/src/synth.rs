//! Seeded synthetic corpus used as the bundled fixture.
//!
//! Reddit-style posts mix a drug alias with sentiment words drawn from
//! class-specific vocabularies; tweets carry emotion-specific vocabulary and an
//! emotion hashtag. A fraction of tweets carry hashtags of two different
//! emotions so distant supervision has conflicts to discard.

use chrono::{DateTime, Duration, Utc};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Post, Source};
use crate::labeling::{EmotionLabel, HashtagMap};
use crate::ontology::{DrugCategory, Ontology};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub reddit_posts: usize,
    pub tweets: usize,
    /// Fraction of tweets tagged with two conflicting emotions.
    pub conflict_rate: f64,
    /// Fraction of tweets without any emotion hashtag.
    pub untagged_rate: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            seed: 20_180_301,
            reddit_posts: 2000,
            tweets: 600,
            conflict_rate: 0.08,
            untagged_rate: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    /// Ids of tweets deliberately tagged with two emotions.
    pub conflict_ids: Vec<String>,
}

const CATEGORY_WEIGHTS: [(DrugCategory, u32); 8] = [
    (DrugCategory::Heroin, 30),
    (DrugCategory::SyntheticHeroin, 6),
    (DrugCategory::PharmaceuticalFentanyl, 7),
    (DrugCategory::NonPharmaceuticalFentanyl, 7),
    (DrugCategory::Fentanyl, 12),
    (DrugCategory::Oxycodone, 12),
    (DrugCategory::Kratom, 18),
    (DrugCategory::Opium, 8),
];

const SUBREDDITS: [&str; 6] = [
    "opiates",
    "opiatesrecovery",
    "suboxone",
    "heroin",
    "drugnerds",
    "researchchemicals",
];

fn subreddit_topics(subreddit: &str) -> &'static [&'static str] {
    match subreddit {
        "opiates" => &["nod", "tolerance break", "dope sick", "plug"],
        "opiatesrecovery" => &[
            "cold turkey withdrawal",
            "cravings",
            "clean time",
            "meetings",
        ],
        "suboxone" => &[
            "induction",
            "precipitated withdrawal",
            "strips",
            "maintenance dose",
        ],
        "heroin" => &["cotton fever", "harm reduction", "test strips", "narcan"],
        "drugnerds" => &["mu receptor", "half life", "metabolite", "binding affinity"],
        _ => &["analogue", "reagent test", "vendor review", "potency"],
    }
}

const POSITIVE: [&str; 24] = [
    "good",
    "great",
    "amazing",
    "happy",
    "helped",
    "relief",
    "better",
    "wonderful",
    "calm",
    "relaxed",
    "excellent",
    "best",
    "safe",
    "smooth",
    "grateful",
    "hopeful",
    "peaceful",
    "comfortable",
    "nice",
    "perfect",
    "effective",
    "glad",
    "proud",
    "enjoyed",
];

const NEGATIVE: [&str; 24] = [
    "bad",
    "terrible",
    "awful",
    "sick",
    "pain",
    "worst",
    "horrible",
    "miserable",
    "scared",
    "anxious",
    "depressed",
    "hopeless",
    "nightmare",
    "hurt",
    "struggling",
    "suffering",
    "nasty",
    "desperate",
    "painful",
    "worse",
    "relapsed",
    "panic",
    "lonely",
    "hate",
];

const NEUTRAL: [&str; 16] = [
    "schedule",
    "info",
    "details",
    "wondering",
    "scale",
    "paperwork",
    "appointment",
    "insurance",
    "refill",
    "pickup",
    "timing",
    "instructions",
    "label",
    "measuring",
    "receipt",
    "tracking",
];

const FILLER: [&str; 30] = [
    "today",
    "week",
    "dose",
    "tolerance",
    "vendor",
    "taper",
    "shipping",
    "morning",
    "days",
    "tried",
    "took",
    "switched",
    "batch",
    "doctor",
    "clinic",
    "pharmacy",
    "question",
    "anyone",
    "thread",
    "night",
    "hours",
    "plan",
    "script",
    "again",
    "first",
    "time",
    "weekend",
    "month",
    "update",
    "story",
];

const OPENERS: [&str; 8] = [
    "honestly",
    "so",
    "update",
    "day three on",
    "anyone tried",
    "first time with",
    "switched to",
    "been using",
];

const CONNECTORS: [&str; 6] = ["was", "feels", "has been", "made me feel", "left me", "is"];

const CLOSERS: [&str; 7] = [
    "this week",
    "tbh",
    "for real",
    "lol",
    "today",
    "since monday",
    "overall",
];

const NEGATED_POSITIVE: [&str; 4] = ["not bad", "never worse", "no pain", "not terrible"];

fn emotion_vocabulary(e: EmotionLabel) -> &'static [&'static str] {
    match e {
        EmotionLabel::Joy => &[
            "high",
            "euphoria",
            "smiling",
            "party",
            "celebrate",
            "vibes",
            "dancing",
        ],
        EmotionLabel::Sadness => &[
            "crying", "funeral", "miss", "alone", "tears", "empty", "lost",
        ],
        EmotionLabel::Anger => &[
            "cops", "scam", "ripped", "yelling", "unfair", "stupid", "fed",
        ],
        EmotionLabel::Love => &[
            "baby", "forever", "heart", "kiss", "partner", "darling", "hug",
        ],
        EmotionLabel::Fear => &[
            "shaking", "terror", "dying", "overdose", "sirens", "paranoid", "sweating",
        ],
        EmotionLabel::Thankfulness => &[
            "sober",
            "recovery",
            "support",
            "family",
            "milestone",
            "sponsor",
            "counselor",
        ],
        EmotionLabel::Surprise => &[
            "suddenly",
            "wow",
            "unbelievable",
            "whoa",
            "random",
            "noticed",
            "twist",
        ],
    }
}

const EMOTION_WEIGHTS: [(EmotionLabel, u32); 7] = [
    (EmotionLabel::Joy, 14),
    (EmotionLabel::Sadness, 24),
    (EmotionLabel::Anger, 10),
    (EmotionLabel::Love, 16),
    (EmotionLabel::Fear, 16),
    (EmotionLabel::Thankfulness, 12),
    (EmotionLabel::Surprise, 8),
];

fn weighted<T: Copy>(rng: &mut ChaCha8Rng, items: &[(T, u32)]) -> T {
    let total: u32 = items.iter().map(|&(_, w)| w).sum();
    let mut pick = rng.random_range(0..total);
    for &(item, w) in items {
        if pick < w {
            return item;
        }
        pick -= w;
    }
    items[items.len() - 1].0
}

fn pick<'a>(rng: &mut ChaCha8Rng, items: &[&'a str]) -> &'a str {
    items.choose(rng).copied().expect("non-empty word list")
}

struct AliasPool {
    by_category: Vec<Vec<String>>,
}

impl AliasPool {
    fn new(ontology: &Ontology) -> Self {
        let mut by_category = vec![Vec::new(); DrugCategory::ALL.len()];
        for e in ontology.entries() {
            by_category[e.supercategory.index()].extend(e.aliases.iter().cloned());
        }
        AliasPool { by_category }
    }

    fn alias(&self, rng: &mut ChaCha8Rng, category: DrugCategory) -> &str {
        self.by_category[category.index()]
            .choose(rng)
            .map(String::as_str)
            .unwrap_or("something")
    }
}

fn reddit_text(rng: &mut ChaCha8Rng, aliases: &AliasPool, subreddit: &str) -> String {
    let category = weighted(rng, &CATEGORY_WEIGHTS);
    let mut drug = aliases.alias(rng, category).to_owned();
    if rng.random_bool(0.1) {
        let other = weighted(rng, &CATEGORY_WEIGHTS);
        drug = format!("{drug} and {}", aliases.alias(rng, other));
    }
    let mut words: Vec<String> = vec![
        pick(rng, &OPENERS).into(),
        drug,
        pick(rng, &CONNECTORS).into(),
    ];
    let roll: f64 = rng.random();
    let n_sentiment = rng.random_range(1..=3);
    if roll < 0.45 {
        for _ in 0..n_sentiment {
            words.push(pick(rng, &POSITIVE).into());
            words.push(pick(rng, &FILLER).into());
        }
        if rng.random_bool(0.15) {
            words.push(pick(rng, &NEGATED_POSITIVE).into());
        }
    } else if roll < 0.8 {
        for _ in 0..n_sentiment {
            words.push(pick(rng, &NEGATIVE).into());
            words.push(pick(rng, &FILLER).into());
        }
    } else {
        for _ in 0..n_sentiment + 1 {
            words.push(pick(rng, &NEUTRAL).into());
            words.push(pick(rng, &FILLER).into());
        }
    }
    words.push(pick(rng, subreddit_topics(subreddit)).into());
    words.push(pick(rng, &CLOSERS).into());
    words.join(" ")
}

fn tweet_text(
    rng: &mut ChaCha8Rng,
    aliases: &AliasPool,
    emotion: EmotionLabel,
    tags: &[String],
) -> String {
    let category = weighted(rng, &CATEGORY_WEIGHTS);
    let vocab = emotion_vocabulary(emotion);
    let mut words: Vec<String> = Vec::new();
    for _ in 0..rng.random_range(2..=4) {
        words.push(pick(rng, vocab).into());
    }
    let at = rng.random_range(0..=words.len());
    words.insert(at, aliases.alias(rng, category).to_owned());
    if rng.random_bool(0.25) {
        let other = weighted(rng, &EMOTION_WEIGHTS);
        words.push(pick(rng, emotion_vocabulary(other)).into());
    }
    words.push(pick(rng, &FILLER).into());
    for t in tags {
        words.push(format!("#{t}"));
    }
    words.join(" ")
}

/// Generates the fixture corpus. Output depends only on `config` and the
/// ontology/hashtag map contents.
pub fn generate(
    config: &SyntheticConfig,
    ontology: &Ontology,
    hashtags: &HashtagMap,
) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let aliases = AliasPool::new(ontology);
    let epoch: DateTime<Utc> = DateTime::parse_from_rfc3339("2018-03-01T00:00:00Z")
        .expect("valid timestamp")
        .with_timezone(&Utc);
    let mut posts = Vec::with_capacity(config.reddit_posts + config.tweets);

    for i in 0..config.reddit_posts {
        let subreddit = pick(&mut rng, &SUBREDDITS);
        let text = reddit_text(&mut rng, &aliases, subreddit);
        let mut post = Post::new(format!("r{i:05}"), Source::Reddit, subreddit, text);
        post.created_at = Some(epoch + Duration::minutes(37 * i as i64));
        posts.push(post);
    }

    let mut conflict_ids = Vec::new();
    for i in 0..config.tweets {
        let id = format!("t{i:05}");
        let roll: f64 = rng.random();
        let mut tags = Vec::new();
        let primary = weighted(&mut rng, &EMOTION_WEIGHTS);
        if roll >= config.untagged_rate {
            tags.push(pick(&mut rng, &hashtags.aliases_of(primary)).to_owned());
        }
        if roll >= config.untagged_rate && roll < config.untagged_rate + config.conflict_rate {
            let others: Vec<EmotionLabel> = EmotionLabel::ALL
                .into_iter()
                .filter(|&e| e != primary)
                .collect();
            let second = *others.choose(&mut rng).expect("six other emotions");
            tags.push(pick(&mut rng, &hashtags.aliases_of(second)).to_owned());
            conflict_ids.push(id.clone());
        }
        let text = tweet_text(&mut rng, &aliases, primary, &tags);
        let mut post = Post::new(id, Source::Twitter, "", text);
        post.created_at = Some(epoch + Duration::minutes(11 * i as i64));
        posts.push(post);
    }

    SyntheticCorpus {
        corpus: Corpus::new("synthetic", posts).expect("generated ids are unique"),
        conflict_ids,
    }
}
