//! Reference implementations used as oracles by the integration tests.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};

use opioid_lens::classifier::{featurize, FeatureVector, LrParameters, SoftmaxObjective};
use opioid_lens::labeling::{LabeledExample, Provenance};
use opioid_lens::topics::{Vocabulary, VocabularyOptions};
use opioid_lens::TokenSequence;
use rand::seq::IndexedRandom;
use rand::Rng;

/// Character-by-character tokenizer: alphanumeric runs, a connector kept only
/// when flanked by alphanumerics, lowercased with U+2019 folded to `'`.
pub fn ref_tokenize(text: &str) -> Vec<(String, (usize, usize))> {
    let cs: Vec<(usize, char)> = text.char_indices().collect();
    let connector = |c: char| c == '-' || c == '\'' || c == '\u{2019}';
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let close = |from: usize, to: usize, out: &mut Vec<(String, (usize, usize))>| {
        let tok: String = text[from..to]
            .to_lowercase()
            .replace('\u{2019}', "'")
            .chars()
            .filter(|&c| c.is_alphanumeric() || c == '-' || c == '\'')
            .collect();
        if !tok.is_empty() {
            out.push((tok, (from, to)));
        }
    };
    for k in 0..cs.len() {
        let (b, c) = cs[k];
        if c.is_alphanumeric() {
            if start.is_none() {
                start = Some(b);
            }
            continue;
        }
        let inside = start.is_some()
            && connector(c)
            && cs[k - 1].1.is_alphanumeric()
            && cs.get(k + 1).is_some_and(|&(_, n)| n.is_alphanumeric());
        if inside {
            continue;
        }
        if let Some(s) = start.take() {
            close(s, b, &mut out);
        }
    }
    if let Some(s) = start {
        close(s, text.len(), &mut out);
    }
    out
}

/// Leftmost-longest gazetteer matching by exhaustive enumeration of every
/// (start, alias) match.
pub fn ref_ner(
    tokens: &[String],
    aliases: &[(Vec<String>, String)],
) -> Vec<(usize, usize, String)> {
    let mut all: Vec<(usize, usize, &str)> = Vec::new();
    for s in 0..tokens.len() {
        for (alias, canonical) in aliases {
            if !alias.is_empty() && tokens[s..].starts_with(alias) {
                all.push((s, s + alias.len(), canonical));
            }
        }
    }
    let mut out = Vec::new();
    let mut pos = 0;
    loop {
        let best = all
            .iter()
            .filter(|m| m.0 >= pos)
            .min_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        match best {
            Some(&(s, e, c)) => {
                out.push((s, e, c.to_owned()));
                pos = e;
            }
            None => return out,
        }
    }
}

/// Every n-gram of `tokens` with `n_min <= n <= n_max`; unigrams in
/// `stopwords` are dropped.
pub fn ref_ngrams(
    tokens: &[String],
    n_min: usize,
    n_max: usize,
    stopwords: &HashSet<String>,
) -> Vec<String> {
    let mut out = Vec::new();
    for n in n_min..=n_max {
        if n > tokens.len() {
            break;
        }
        for s in 0..=tokens.len() - n {
            let g = tokens[s..s + n].join(" ");
            if n == 1 && stopwords.contains(&g) {
                continue;
            }
            out.push(g);
        }
    }
    out
}

/// Dense term-document matrix reference.
pub struct DenseTfidf {
    pub terms: Vec<String>,
    pub doc_freq: Vec<usize>,
    /// `tf[d][t]`
    pub tf: Vec<Vec<f64>>,
}

impl DenseTfidf {
    pub fn new(
        docs: &[Vec<String>],
        n_min: usize,
        n_max: usize,
        min_df: usize,
        stopwords: &HashSet<String>,
    ) -> Self {
        let grams: Vec<Vec<String>> = docs
            .iter()
            .map(|d| ref_ngrams(d, n_min, n_max, stopwords))
            .collect();
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for g in &grams {
            for t in g.iter().collect::<BTreeSet<_>>() {
                *df.entry(t.clone()).or_default() += 1;
            }
        }
        let terms: Vec<String> = df
            .iter()
            .filter(|(_, &n)| n >= min_df)
            .map(|(t, _)| t.clone())
            .collect();
        let doc_freq = terms.iter().map(|t| df[t]).collect();
        let tf = grams
            .iter()
            .map(|g| {
                terms
                    .iter()
                    .map(|t| g.iter().filter(|x| *x == t).count() as f64)
                    .collect()
            })
            .collect();
        DenseTfidf {
            terms,
            doc_freq,
            tf,
        }
    }

    pub fn idf(&self, t: usize) -> f64 {
        let n = self.tf.len() as f64;
        ((1.0 + n) / (1.0 + self.doc_freq[t] as f64)).ln() + 1.0
    }

    /// Σ over documents of tf · idf.
    pub fn corpus_scores(&self) -> Vec<f64> {
        (0..self.terms.len())
            .map(|t| self.tf.iter().map(|row| row[t] * self.idf(t)).sum())
            .collect()
    }

    /// Terms with a positive score, best first; scores within 1e-9 count as
    /// equal and fall back to lexicographic order.
    pub fn ranking(&self, k: usize) -> Vec<(String, f64)> {
        let scores = self.corpus_scores();
        let mut ranked: Vec<(String, f64)> = self
            .terms
            .iter()
            .cloned()
            .zip(scores)
            .filter(|(_, s)| *s > 0.0)
            .collect();
        ranked.sort_by(|a, b| {
            if (a.1 - b.1).abs() <= 1e-9 * a.1.abs().max(1.0) {
                a.0.cmp(&b.0)
            } else {
                b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal)
            }
        });
        ranked.truncate(k);
        ranked
    }
}

pub fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_owned).collect()
}

const NER_WORDS: [&str; 8] = [
    "tar", "black", "china", "white", "m30", "blues", "oxy", "pressed",
];
const NOISE: [&str; 8] = ["the", "and", "got", "some", "today", "Black", "WHITE", "x"];

/// A gazetteer of 30 aliases drawn from a tiny vocabulary, so that aliases
/// share prefixes and overlap. Returns the ontology TSV and the oracle alias
/// list (canonical names included, since they are aliases of themselves).
pub fn overlapping_gazetteer<R: Rng>(rng: &mut R) -> (String, Vec<(Vec<String>, String)>) {
    let mut aliases: Vec<Vec<String>> = Vec::new();
    while aliases.len() < 30 {
        let len = rng.random_range(1..=3);
        let a: Vec<String> = (0..len)
            .map(|_| NER_WORDS.choose(rng).unwrap().to_string())
            .collect();
        if !aliases.contains(&a) {
            aliases.push(a);
        }
    }
    let categories = [
        "Heroin",
        "Fentanyl",
        "Oxycodone",
        "Kratom",
        "Opium",
        "SyntheticHeroin",
    ];
    let mut tsv = String::new();
    let mut oracle = Vec::new();
    for (e, chunk) in aliases.chunks(3).enumerate() {
        let canonical = format!("Entity{e}");
        let joined: Vec<String> = chunk.iter().map(|a| a.join(" ")).collect();
        tsv.push_str(&format!(
            "{canonical}\tClass{e}\t{}\t{}\n",
            categories[e % categories.len()],
            joined.join("|")
        ));
        oracle.push((vec![canonical.to_lowercase()], canonical.clone()));
        for a in chunk {
            oracle.push((a.clone(), canonical.clone()));
        }
    }
    (tsv, oracle)
}

/// Text of at most `max_chars` bytes mixing alias words, canonical names,
/// noise and punctuation.
pub fn gazetteer_text<R: Rng>(rng: &mut R, max_chars: usize) -> String {
    let mut out = String::new();
    loop {
        let word = match rng.random_range(0..10) {
            0..=5 => NER_WORDS.choose(rng).unwrap().to_string(),
            6 => format!("Entity{}", rng.random_range(0..10)),
            _ => NOISE.choose(rng).unwrap().to_string(),
        };
        let sep = [" ", " ", " ", ", ", "! ", " #", "-"].choose(rng).unwrap();
        if out.len() + word.len() + sep.len() > max_chars {
            return out;
        }
        out.push_str(&word);
        out.push_str(sep);
    }
}

const TFIDF_WORDS: [&str; 12] = [
    "heroin",
    "kratom",
    "withdrawal",
    "cold",
    "turkey",
    "the",
    "of",
    "and",
    "dose",
    "sick",
    "clean",
    "days",
];

/// Up to `max_docs` documents of up to `max_tokens` tokens over a small
/// vocabulary; at least one document.
pub fn random_docs<R: Rng>(rng: &mut R, max_docs: usize, max_tokens: usize) -> Vec<Vec<String>> {
    let n = rng.random_range(1..=max_docs);
    (0..n)
        .map(|_| {
            let len = rng.random_range(0..=max_tokens);
            (0..len)
                .map(|_| TFIDF_WORDS.choose(rng).unwrap().to_string())
                .collect()
        })
        .collect()
}

/// Gold-provenance examples from `(text, label)` pairs split on whitespace.
pub fn examples(docs: &[(&str, &'static str)]) -> Vec<LabeledExample<&'static str>> {
    docs.iter()
        .enumerate()
        .map(|(i, (t, l))| {
            LabeledExample::new(
                format!("e{i}"),
                TokenSequence::from_tokens(words(t)),
                *l,
                Provenance::Gold,
            )
        })
        .collect()
}

/// Unigram and bigram vocabulary over the examples, min_df 1.
pub fn vocab_of(ex: &[LabeledExample<&str>]) -> Vocabulary {
    let docs: Vec<TokenSequence> = ex.iter().map(|e| e.tokens.clone()).collect();
    Vocabulary::build(&docs, &VocabularyOptions::new(1, 2, 1)).unwrap()
}

/// Largest relative error between the analytic gradient and central finite
/// differences with step `h`.
pub fn max_gradient_error(obj: &SoftmaxObjective<'_>, params: &LrParameters, h: f64) -> f64 {
    let (_, grad) = obj.loss_and_gradient(params);
    let mut worst: f64 = 0.0;
    let mut check = |analytic: f64, numeric: f64| {
        let denom = analytic.abs().max(numeric.abs()).max(1e-8);
        worst = worst.max((analytic - numeric).abs() / denom);
    };
    for i in 0..params.weights.len() {
        let (mut plus, mut minus) = (params.clone(), params.clone());
        plus.weights[i] += h;
        minus.weights[i] -= h;
        check(
            grad.weights[i],
            (obj.loss(&plus) - obj.loss(&minus)) / (2.0 * h),
        );
    }
    for i in 0..params.bias.len() {
        let (mut plus, mut minus) = (params.clone(), params.clone());
        plus.bias[i] += h;
        minus.bias[i] -= h;
        check(
            grad.bias[i],
            (obj.loss(&plus) - obj.loss(&minus)) / (2.0 * h),
        );
    }
    worst
}

pub fn separable_toy() -> Vec<LabeledExample<&'static str>> {
    examples(&[
        ("heroin nod warm", "A"),
        ("heroin warm", "A"),
        ("nod nod heroin", "A"),
        ("warm heroin nod", "A"),
        ("heroin", "A"),
        ("kratom tea leaf", "B"),
        ("kratom leaf", "B"),
        ("tea tea kratom", "B"),
        ("leaf kratom tea", "B"),
        ("kratom", "B"),
    ])
}

/// Three documents, one per class: (features, targets, dimension).
pub fn three_doc() -> (Vec<FeatureVector>, Vec<usize>, usize) {
    let ex = examples(&[
        ("good calm dose", "P"),
        ("bad sick dose", "N"),
        ("calm days", "U"),
    ]);
    let v = vocab_of(&ex);
    let x = ex
        .iter()
        .map(|e| featurize(&e.tokens, &v, v.n_docs()))
        .collect();
    (x, vec![0, 1, 2], v.len())
}
