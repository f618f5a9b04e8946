//! Documents, tokenization and corpus ingestion.
//!
//! Posts are read from line-delimited JSON (the canonical format) or from CSV
//! with the same column names. Hashtags are harvested from the text at load
//! time and merged with any explicit `hashtags` field.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Reddit,
    Twitter,
    Market,
    Synthetic,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Reddit => "reddit",
            Source::Twitter => "twitter",
            Source::Market => "market",
            Source::Synthetic => "synthetic",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "reddit" => Ok(Source::Reddit),
            "twitter" => Ok(Source::Twitter),
            "market" => Ok(Source::Market),
            "synthetic" => Ok(Source::Synthetic),
            other => Err(format!(
                "unknown source `{other}` (expected reddit, twitter, market or synthetic)"
            )),
        }
    }
}

/// One social-media document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    pub id: String,
    pub source: Source,
    #[serde(default)]
    pub collection: String,
    pub text: String,
    /// Lowercase, without the leading `#`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hashtags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_at: Option<DateTime<Utc>>,
}

impl Post {
    /// Builds a post, harvesting `#tags` from `text`.
    pub fn new(
        id: impl Into<String>,
        source: Source,
        collection: impl Into<String>,
        text: impl Into<String>,
    ) -> Self {
        let text = text.into();
        let hashtags = merge_hashtags(Vec::new(), &text);
        Post {
            id: id.into(),
            source,
            collection: collection.into(),
            text,
            hashtags,
            created_at: None,
        }
    }

    pub fn tokens(&self) -> TokenSequence {
        tokenize(&self.text)
    }
}

/// Lowercased tokens plus their byte spans into the source text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSequence {
    pub tokens: Vec<String>,
    pub spans: Vec<(usize, usize)>,
}

impl TokenSequence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Builds a sequence from bare tokens, with synthetic spans as if the
    /// tokens were joined by single spaces.
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seq = TokenSequence::default();
        let mut offset = 0;
        for t in tokens {
            let t = t.into();
            let end = offset + t.len();
            seq.spans.push((offset, end));
            seq.tokens.push(t);
            offset = end + 1;
        }
        seq
    }

    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub name: String,
    pub posts: Vec<Post>,
}

impl Corpus {
    /// Fails on an empty or duplicate id.
    pub fn new(name: impl Into<String>, posts: Vec<Post>) -> Result<Self> {
        let name = name.into();
        let mut seen = HashSet::with_capacity(posts.len());
        for (i, post) in posts.iter().enumerate() {
            if post.id.is_empty() {
                return Err(Error::parse(&name, i + 1, Some("id"), "empty id"));
            }
            if !seen.insert(post.id.as_str()) {
                return Err(Error::parse(
                    &name,
                    i + 1,
                    Some("id"),
                    format!("duplicate id `{}`", post.id),
                ));
            }
        }
        Ok(Corpus { name, posts })
    }

    pub fn len(&self) -> usize {
        self.posts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posts.is_empty()
    }

    pub fn token_sequences(&self) -> Vec<TokenSequence> {
        self.posts.iter().map(Post::tokens).collect()
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_connector(c: char) -> bool {
    matches!(c, '-' | '\'' | '\u{2019}')
}

fn normalize_token(raw: &str) -> String {
    raw.to_lowercase()
        .chars()
        .map(|c| if c == '\u{2019}' { '\'' } else { c })
        .filter(|&c| is_word_char(c) || is_connector(c))
        .collect()
}

/// Splits text into maximal alphanumeric runs, lowercased. A single `-` or
/// apostrophe between two alphanumerics stays inside the token. Everything
/// else, `#` included, separates tokens.
pub fn tokenize(text: &str) -> TokenSequence {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut seq = TokenSequence::default();
    let mut i = 0;
    while i < chars.len() {
        if !is_word_char(chars[i].1) {
            i += 1;
            continue;
        }
        let start = chars[i].0;
        let mut j = i + 1;
        loop {
            if j < chars.len() && is_word_char(chars[j].1) {
                j += 1;
            } else if j + 1 < chars.len()
                && is_connector(chars[j].1)
                && is_word_char(chars[j + 1].1)
            {
                j += 2;
            } else {
                break;
            }
        }
        let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
        let token = normalize_token(&text[start..end]);
        if !token.is_empty() {
            seq.tokens.push(token);
            seq.spans.push((start, end));
        }
        i = j;
    }
    seq
}

/// Tokens that are immediately preceded by `#`, in text order, deduplicated.
pub fn extract_hashtags(text: &str) -> Vec<String> {
    merge_hashtags(Vec::new(), text)
}

fn merge_hashtags(mut tags: Vec<String>, text: &str) -> Vec<String> {
    let seq = tokenize(text);
    for (tok, &(start, _)) in seq.tokens.iter().zip(&seq.spans) {
        if text[..start].ends_with('#') && !tags.contains(tok) {
            tags.push(tok.clone());
        }
    }
    tags
}

fn normalize_explicit_hashtag(raw: &str) -> Option<String> {
    let tag = raw.trim().trim_start_matches('#').to_lowercase();
    if tag.is_empty() || tag.contains('#') || tag.chars().any(char::is_whitespace) {
        None
    } else {
        Some(tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PostFormat {
    Jsonl,
    Csv,
}

impl PostFormat {
    /// Guesses the format from the file extension; anything but `.csv` is JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => PostFormat::Csv,
            _ => PostFormat::Jsonl,
        }
    }
}

/// Fields of one record before validation.
#[derive(Default)]
struct RawPost {
    id: Option<String>,
    source: Option<String>,
    collection: Option<String>,
    text: Option<String>,
    hashtags: Vec<String>,
    created_at: Option<String>,
}

impl RawPost {
    fn into_post(self, source_name: &str, line: usize) -> Result<Post> {
        let err = |field: &str, msg: &str| Error::parse(source_name, line, Some(field), msg);
        let id = self
            .id
            .filter(|s| !s.is_empty())
            .ok_or_else(|| err("id", "missing or empty"))?;
        let source: Source = self
            .source
            .ok_or_else(|| err("source", "missing"))?
            .parse()
            .map_err(|m: String| err("source", &m))?;
        let text = self.text.ok_or_else(|| err("text", "missing"))?;
        let created_at = match self.created_at {
            Some(raw) => Some(
                DateTime::parse_from_rfc3339(&raw)
                    .map_err(|e| err("created_at", &format!("not RFC 3339: {e}")))?
                    .with_timezone(&Utc),
            ),
            None => None,
        };
        let mut explicit = Vec::new();
        for raw in &self.hashtags {
            let tag = normalize_explicit_hashtag(raw)
                .ok_or_else(|| err("hashtags", &format!("invalid hashtag `{raw}`")))?;
            if !explicit.contains(&tag) {
                explicit.push(tag);
            }
        }
        let hashtags = merge_hashtags(explicit, &text);
        Ok(Post {
            id,
            source,
            collection: self.collection.unwrap_or_default(),
            text,
            hashtags,
            created_at,
        })
    }
}

fn optional_string(
    obj: &serde_json::Map<String, Value>,
    key: &str,
    source_name: &str,
    line: usize,
) -> Result<Option<String>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(Error::parse(
            source_name,
            line,
            Some(key),
            "expected a string",
        )),
    }
}

fn raw_from_json(line_text: &str, source_name: &str, line: usize) -> Result<RawPost> {
    let value: Value = serde_json::from_str(line_text)
        .map_err(|e| Error::parse(source_name, line, None, format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse(source_name, line, None, "expected a JSON object"))?;
    let hashtags = match obj.get("hashtags") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| {
                v.as_str().map(str::to_owned).ok_or_else(|| {
                    Error::parse(
                        source_name,
                        line,
                        Some("hashtags"),
                        "expected an array of strings",
                    )
                })
            })
            .collect::<Result<_>>()?,
        Some(_) => {
            return Err(Error::parse(
                source_name,
                line,
                Some("hashtags"),
                "expected an array of strings",
            ))
        }
    };
    Ok(RawPost {
        id: optional_string(obj, "id", source_name, line)?,
        source: optional_string(obj, "source", source_name, line)?,
        collection: optional_string(obj, "collection", source_name, line)?,
        text: optional_string(obj, "text", source_name, line)?,
        hashtags,
        created_at: optional_string(obj, "created_at", source_name, line)?,
    })
}

fn corpus_name(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("corpus")
        .to_owned()
}

/// Reads every post of a JSONL or CSV file, in file order.
pub fn load_posts(path: impl AsRef<Path>, format: PostFormat) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let source_name = path.display().to_string();
    let posts = match format {
        PostFormat::Jsonl => read_jsonl_posts(BufReader::new(file), &source_name)?,
        PostFormat::Csv => read_csv_posts(file, &source_name)?,
    };
    check_unique(&posts.0, &posts.1, &source_name)?;
    Ok(Corpus {
        name: corpus_name(path),
        posts: posts.0,
    })
}

/// Reads JSONL posts from any reader. Blank lines are skipped.
pub fn read_posts_jsonl<R: BufRead>(reader: R, source_name: &str) -> Result<Corpus> {
    let (posts, lines) = read_jsonl_posts(reader, source_name)?;
    check_unique(&posts, &lines, source_name)?;
    Ok(Corpus {
        name: source_name.to_owned(),
        posts,
    })
}

fn read_jsonl_posts<R: BufRead>(reader: R, source_name: &str) -> Result<(Vec<Post>, Vec<usize>)> {
    let mut posts = Vec::new();
    let mut lines = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(source_name, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw = raw_from_json(&line, source_name, line_no)?;
        posts.push(raw.into_post(source_name, line_no)?);
        lines.push(line_no);
    }
    Ok((posts, lines))
}

fn read_csv_posts<R: Read>(reader: R, source_name: &str) -> Result<(Vec<Post>, Vec<usize>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let cols = [
        column("id"),
        column("source"),
        column("collection"),
        column("text"),
        column("hashtags"),
        column("created_at"),
    ];
    let mut posts = Vec::new();
    let mut lines = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let get = |i: usize| {
            cols[i]
                .and_then(|c| record.get(c))
                .filter(|s| !s.is_empty())
                .map(str::to_owned)
        };
        let raw = RawPost {
            id: get(0),
            source: get(1),
            collection: get(2),
            text: cols[3].and_then(|c| record.get(c)).map(str::to_owned),
            hashtags: get(4)
                .map(|s| s.split('|').map(str::to_owned).collect())
                .unwrap_or_default(),
            created_at: get(5),
        };
        posts.push(raw.into_post(source_name, line)?);
        lines.push(line);
    }
    Ok((posts, lines))
}

fn check_unique(posts: &[Post], lines: &[usize], source_name: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(posts.len());
    for (post, &line) in posts.iter().zip(lines) {
        if !seen.insert(post.id.as_str()) {
            return Err(Error::parse(
                source_name,
                line,
                Some("id"),
                format!("duplicate id `{}`", post.id),
            ));
        }
    }
    Ok(())
}

/// Writes the corpus in the canonical JSONL form.
pub fn write_posts_jsonl<W: Write>(corpus: &Corpus, mut out: W) -> Result<()> {
    for post in &corpus.posts {
        serde_json::to_writer(&mut out, post)?;
        out.write_all(b"\n")
            .map_err(|e| Error::io(&corpus.name, e))?;
    }
    Ok(())
}
