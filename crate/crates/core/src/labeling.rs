//! Weak supervision: lexicon polarity for sentiment, hashtags for emotion.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{tokenize, Post, TokenSequence};
use crate::error::{Error, Result};

const BUNDLED_LEXICON: &str = include_str!("../data/lexicon.tsv");
const BUNDLED_HASHTAGS: &str = include_str!("../data/hashtags.tsv");

/// Scores strictly inside `(-NEUTRAL_BAND, NEUTRAL_BAND)`, and the band edges
/// themselves, are Neutral.
pub const NEUTRAL_BAND: f64 = 0.1;

/// Tokens before a lexicon hit that are searched for a negator.
pub const NEGATION_WINDOW: usize = 2;

/// A class label usable by the classifiers: anything with a stable name.
pub trait ClassLabel {
    fn name(&self) -> &str;
}

impl ClassLabel for String {
    fn name(&self) -> &str {
        self
    }
}

impl ClassLabel for &str {
    fn name(&self) -> &str {
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SentimentLabel {
    Positive,
    Negative,
    Neutral,
}

impl SentimentLabel {
    pub const ALL: [SentimentLabel; 3] = [
        SentimentLabel::Positive,
        SentimentLabel::Negative,
        SentimentLabel::Neutral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SentimentLabel::Positive => "Positive",
            SentimentLabel::Negative => "Negative",
            SentimentLabel::Neutral => "Neutral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EmotionLabel {
    Joy,
    Sadness,
    Anger,
    Love,
    Fear,
    Thankfulness,
    Surprise,
}

impl EmotionLabel {
    pub const ALL: [EmotionLabel; 7] = [
        EmotionLabel::Joy,
        EmotionLabel::Sadness,
        EmotionLabel::Anger,
        EmotionLabel::Love,
        EmotionLabel::Fear,
        EmotionLabel::Thankfulness,
        EmotionLabel::Surprise,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionLabel::Joy => "Joy",
            EmotionLabel::Sadness => "Sadness",
            EmotionLabel::Anger => "Anger",
            EmotionLabel::Love => "Love",
            EmotionLabel::Fear => "Fear",
            EmotionLabel::Thankfulness => "Thankfulness",
            EmotionLabel::Surprise => "Surprise",
        }
    }
}

macro_rules! label_impls {
    ($ty:ty) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
                <$ty>::ALL
                    .into_iter()
                    .find(|l| l.as_str().eq_ignore_ascii_case(s.trim()))
                    .ok_or_else(|| format!("unknown label `{s}`"))
            }
        }

        impl ClassLabel for $ty {
            fn name(&self) -> &str {
                self.as_str()
            }
        }
    };
}

label_impls!(SentimentLabel);
label_impls!(EmotionLabel);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Lexicon-derived.
    Weak,
    /// Derived from an emotion hashtag.
    Hashtag,
    Gold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledExample<L> {
    pub id: String,
    pub tokens: TokenSequence,
    pub label: L,
    pub provenance: Provenance,
}

impl<L> LabeledExample<L> {
    pub fn new(
        id: impl Into<String>,
        tokens: TokenSequence,
        label: L,
        provenance: Provenance,
    ) -> Self {
        LabeledExample {
            id: id.into(),
            tokens,
            label,
            provenance,
        }
    }
}

/// One line of the labels JSONL output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub post_id: String,
    pub label: String,
    pub provenance: Provenance,
    pub text: String,
}

/// Unigram polarities in `[-1, 1]` plus a negator set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PolarityLexicon {
    polarity: HashMap<String, f64>,
    negators: HashSet<String>,
}

impl PolarityLexicon {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_LEXICON, "bundled lexicon").expect("bundled lexicon is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// `term<TAB>polarity` lines, then negators one per line after a
    /// `[negators]` header. `#` starts a comment line.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut lex = PolarityLexicon::default();
        let mut in_negators = false;
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if trimmed.eq_ignore_ascii_case("[negators]") {
                in_negators = true;
                continue;
            }
            if in_negators {
                let word = single_token(trimmed, source_name, line_no, "negator")?;
                lex.negators.insert(word);
                continue;
            }
            let (term, value) = trimmed.split_once('\t').ok_or_else(|| {
                Error::parse(source_name, line_no, None, "expected `term<TAB>polarity`")
            })?;
            let term = single_token(term, source_name, line_no, "term")?;
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::parse(
                    source_name,
                    line_no,
                    Some("polarity"),
                    format!("`{}` is not a number", value.trim()),
                )
            })?;
            if !(-1.0..=1.0).contains(&value) {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    Some("polarity"),
                    format!("{value} is outside [-1, 1]"),
                ));
            }
            if lex.polarity.insert(term.clone(), value).is_some() {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    Some("term"),
                    format!("duplicate term `{term}`"),
                ));
            }
        }
        Ok(lex)
    }

    pub fn from_entries<'a>(
        entries: impl IntoIterator<Item = (&'a str, f64)>,
        negators: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        PolarityLexicon {
            polarity: entries
                .into_iter()
                .map(|(t, p)| (t.to_lowercase(), p.clamp(-1.0, 1.0)))
                .collect(),
            negators: negators.into_iter().map(str::to_lowercase).collect(),
        }
    }

    pub fn polarity(&self, term: &str) -> Option<f64> {
        self.polarity.get(term).copied()
    }

    pub fn is_negator(&self, token: &str) -> bool {
        self.negators.contains(token)
    }

    pub fn len(&self) -> usize {
        self.polarity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polarity.is_empty()
    }

    /// Terms sorted alphabetically, with their polarity.
    pub fn terms(&self) -> Vec<(&str, f64)> {
        let mut v: Vec<_> = self
            .polarity
            .iter()
            .map(|(t, &p)| (t.as_str(), p))
            .collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn negators(&self) -> BTreeSet<&str> {
        self.negators.iter().map(String::as_str).collect()
    }
}

fn single_token(raw: &str, source_name: &str, line: usize, field: &str) -> Result<String> {
    let seq = tokenize(raw);
    match seq.tokens.as_slice() {
        [one] => Ok(one.clone()),
        _ => Err(Error::parse(
            source_name,
            line,
            Some(field),
            format!("`{}` must be a single token", raw.trim()),
        )),
    }
}

/// Mean polarity of the lexicon hits in `text`. A hit preceded within two
/// tokens by a negator counts with flipped sign. No hits gives 0.
pub fn polarity_score(text: &str, lexicon: &PolarityLexicon) -> f64 {
    polarity_of_tokens(&tokenize(text).tokens, lexicon)
}

pub fn polarity_of_tokens(tokens: &[String], lexicon: &PolarityLexicon) -> f64 {
    let mut sum = 0.0;
    let mut hits = 0usize;
    for (i, tok) in tokens.iter().enumerate() {
        let Some(p) = lexicon.polarity(tok) else {
            continue;
        };
        let negated = tokens[i.saturating_sub(NEGATION_WINDOW)..i]
            .iter()
            .any(|t| lexicon.is_negator(t));
        sum += if negated { -p } else { p };
        hits += 1;
    }
    if hits == 0 {
        0.0
    } else {
        (sum / hits as f64).clamp(-1.0, 1.0)
    }
}

/// Maps a polarity score onto three classes with an exclusive ±0.1 dead band.
pub fn sentiment_label(score: f64) -> Result<SentimentLabel> {
    if !(-1.0..=1.0).contains(&score) {
        return Err(Error::ScoreOutOfRange(score));
    }
    Ok(if score > NEUTRAL_BAND {
        SentimentLabel::Positive
    } else if score < -NEUTRAL_BAND {
        SentimentLabel::Negative
    } else {
        SentimentLabel::Neutral
    })
}

/// Emotion → hashtag aliases (lowercase, no `#`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HashtagMap {
    aliases: HashMap<String, EmotionLabel>,
}

impl HashtagMap {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_HASHTAGS, "bundled hashtag map").expect("bundled hashtag map is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// `emotion<TAB>alias|alias|...` lines; `#` starts a comment line.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut map = HashtagMap::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (emotion, aliases) = trimmed.split_once('\t').ok_or_else(|| {
                Error::parse(source_name, line_no, None, "expected `emotion<TAB>aliases`")
            })?;
            let emotion: EmotionLabel = emotion
                .parse()
                .map_err(|m: String| Error::parse(source_name, line_no, Some("emotion"), m))?;
            for raw in aliases.split('|') {
                let alias = single_token(
                    raw.trim().trim_start_matches('#'),
                    source_name,
                    line_no,
                    "aliases",
                )?;
                match map.aliases.insert(alias.clone(), emotion) {
                    Some(prev) if prev != emotion => {
                        return Err(Error::parse(
                            source_name,
                            line_no,
                            Some("aliases"),
                            format!("hashtag `{alias}` already maps to {prev}"),
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(map)
    }

    pub fn from_entries<'a>(
        entries: impl IntoIterator<Item = (EmotionLabel, &'a [&'a str])>,
    ) -> Self {
        let mut map = HashtagMap::default();
        for (emotion, aliases) in entries {
            for a in aliases {
                map.aliases.insert(a.to_lowercase(), emotion);
            }
        }
        map
    }

    pub fn emotion_of(&self, hashtag: &str) -> Option<EmotionLabel> {
        self.aliases.get(hashtag).copied()
    }

    /// Sorted aliases of one emotion.
    pub fn aliases_of(&self, emotion: EmotionLabel) -> Vec<&str> {
        let mut v: Vec<&str> = self
            .aliases
            .iter()
            .filter(|(_, &e)| e == emotion)
            .map(|(a, _)| a.as_str())
            .collect();
        v.sort_unstable();
        v
    }
}

/// Distant supervision from hashtags. Returns the emotion and the text with
/// every token of that emotion's aliases (and any `#` in front of it) removed,
/// or `None` when the post carries no emotion hashtag or hashtags of more
/// than one emotion.
pub fn emotion_label(post: &Post, map: &HashtagMap) -> Option<(EmotionLabel, String)> {
    let emotions: BTreeSet<EmotionLabel> = post
        .hashtags
        .iter()
        .filter_map(|h| map.emotion_of(h))
        .collect();
    let mut iter = emotions.into_iter();
    let emotion = iter.next()?;
    if iter.next().is_some() {
        return None;
    }
    Some((emotion, strip_emotion_tokens(&post.text, emotion, map)))
}

fn strip_emotion_tokens(text: &str, emotion: EmotionLabel, map: &HashtagMap) -> String {
    let seq = tokenize(text);
    let mut out = String::with_capacity(text.len());
    let mut cursor = 0;
    for (tok, &(start, end)) in seq.tokens.iter().zip(&seq.spans) {
        if map.emotion_of(tok) != Some(emotion) {
            continue;
        }
        let cut = text[..start].trim_end_matches('#').len().max(cursor);
        out.push_str(&text[cursor..cut]);
        out.push(' ');
        cursor = end;
    }
    out.push_str(&text[cursor..]);
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}
