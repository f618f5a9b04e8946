//! Pipeline configuration: a TOML file of flat `key = value` pairs plus
//! command-line overrides.
//!
//! ```toml
//! seed = 20180301
//! corpus = "posts.jsonl"
//! ontology = "../ontology.tsv"
//! lexicon = "../lexicon.tsv"
//! hashtags = "../hashtags.tsv"
//! output_dir = "out"
//! model = "nb"
//! ```
//!
//! Relative paths resolve against the directory holding the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifier::LrHyperparameters;
use crate::error::{Error, Result};
use crate::report::Assignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Nb,
    Lr,
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "nb" => Ok(ModelKind::Nb),
            "lr" => Ok(ModelKind::Lr),
            _ => Err(format!("unknown model `{s}` (expected nb or lr)")),
        }
    }
}

/// Values that may be overridden from the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub sample_n: Option<usize>,
    pub ngram_max: Option<usize>,
    pub min_df: Option<usize>,
    pub model: Option<ModelKind>,
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    corpus: Option<PathBuf>,
    ontology: Option<PathBuf>,
    lexicon: Option<PathBuf>,
    hashtags: Option<PathBuf>,
    output_dir: Option<PathBuf>,
    listings: Option<PathBuf>,
    stopwords: Option<PathBuf>,
    ngram_min: Option<usize>,
    ngram_max: Option<usize>,
    min_df: Option<usize>,
    top_k: Option<usize>,
    sample_n: Option<usize>,
    model: Option<ModelKind>,
    alpha: Option<f64>,
    learning_rate: Option<f64>,
    l2: Option<f64>,
    epochs: Option<usize>,
    train_fraction: Option<f64>,
    assignment: Option<Assignment>,
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub seed: u64,
    pub corpus: PathBuf,
    pub ontology: PathBuf,
    pub lexicon: PathBuf,
    pub hashtags: PathBuf,
    /// Not part of [`PipelineConfig::hash`]: artifacts do not depend on it.
    #[serde(skip)]
    pub output_dir: PathBuf,
    pub listings: Option<PathBuf>,
    /// Bundled English list when absent.
    pub stopwords: Option<PathBuf>,
    pub ngram_min: usize,
    pub ngram_max: usize,
    pub min_df: usize,
    pub top_k: usize,
    pub sample_n: usize,
    pub model: ModelKind,
    pub alpha: f64,
    pub learning_rate: f64,
    pub l2: f64,
    pub epochs: usize,
    pub train_fraction: f64,
    pub assignment: Assignment,
}

fn required<T>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| Error::config(field, "missing required field"))
}

fn existing_file(base: &Path, path: PathBuf, field: &str) -> Result<PathBuf> {
    let p = base.join(path);
    if !p.is_file() {
        return Err(Error::config(
            field,
            format!("file not found: {}", p.display()),
        ));
    }
    Ok(p)
}

impl PipelineConfig {
    pub fn load(path: impl AsRef<Path>, overrides: &Overrides) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base, overrides)
    }

    /// Parses TOML text; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path, overrides: &Overrides) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::config("config", e.message().to_owned()))?;
        let defaults = LrHyperparameters::default();
        let cfg = PipelineConfig {
            seed: required(overrides.seed.or(raw.seed), "seed")?,
            corpus: existing_file(base, required(raw.corpus, "corpus")?, "corpus")?,
            ontology: existing_file(base, required(raw.ontology, "ontology")?, "ontology")?,
            lexicon: existing_file(base, required(raw.lexicon, "lexicon")?, "lexicon")?,
            hashtags: existing_file(base, required(raw.hashtags, "hashtags")?, "hashtags")?,
            output_dir: match &overrides.output_dir {
                Some(p) => p.clone(),
                None => base.join(required(raw.output_dir, "output_dir")?),
            },
            listings: raw
                .listings
                .map(|p| existing_file(base, p, "listings"))
                .transpose()?,
            stopwords: raw
                .stopwords
                .map(|p| existing_file(base, p, "stopwords"))
                .transpose()?,
            ngram_min: raw.ngram_min.unwrap_or(1),
            ngram_max: overrides.ngram_max.or(raw.ngram_max).unwrap_or(3),
            min_df: overrides.min_df.or(raw.min_df).unwrap_or(2),
            top_k: raw.top_k.unwrap_or(10),
            sample_n: overrides.sample_n.or(raw.sample_n).unwrap_or(800),
            model: overrides.model.or(raw.model).unwrap_or(ModelKind::Nb),
            alpha: raw.alpha.unwrap_or(1.0),
            learning_rate: raw.learning_rate.unwrap_or(defaults.learning_rate),
            l2: raw.l2.unwrap_or(defaults.l2),
            epochs: raw.epochs.unwrap_or(defaults.epochs),
            train_fraction: raw.train_fraction.unwrap_or(0.8),
            assignment: raw.assignment.unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !(1 <= self.ngram_min && self.ngram_min <= self.ngram_max && self.ngram_max <= 3) {
            return Err(Error::config(
                "ngram_max",
                format!(
                    "need 1 <= ngram_min <= ngram_max <= 3, got {}..{}",
                    self.ngram_min, self.ngram_max
                ),
            ));
        }
        let checks: [(&str, bool, &str); 7] = [
            ("min_df", self.min_df >= 1, "must be at least 1"),
            ("top_k", self.top_k >= 1, "must be at least 1"),
            ("sample_n", self.sample_n >= 1, "must be at least 1"),
            ("epochs", self.epochs >= 1, "must be at least 1"),
            (
                "alpha",
                self.alpha > 0.0 && self.alpha.is_finite(),
                "must be positive",
            ),
            (
                "learning_rate",
                self.learning_rate > 0.0 && self.learning_rate.is_finite(),
                "must be positive",
            ),
            (
                "train_fraction",
                self.train_fraction > 0.0 && self.train_fraction < 1.0,
                "must be in (0, 1)",
            ),
        ];
        for (field, ok, msg) in checks {
            if !ok {
                return Err(Error::config(field, msg));
            }
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return Err(Error::config("l2", "must be non-negative"));
        }
        Ok(())
    }

    pub fn lr_hyperparameters(&self) -> LrHyperparameters {
        LrHyperparameters {
            learning_rate: self.learning_rate,
            l2: self.l2,
            epochs: self.epochs,
            seed: self.seed,
        }
    }

    /// SHA-256 of the canonical JSON form of the resolved configuration.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
    }

    const MINIMAL: &str = r#"
seed = 1
corpus = "fixtures/posts.jsonl"
ontology = "ontology.tsv"
lexicon = "lexicon.tsv"
hashtags = "hashtags.tsv"
output_dir = "out"
"#;

    #[test]
    fn defaults_and_overrides() {
        let cfg = PipelineConfig::parse(MINIMAL, &base(), &Overrides::default()).unwrap();
        assert_eq!(
            (cfg.sample_n, cfg.ngram_max, cfg.model),
            (800, 3, ModelKind::Nb)
        );
        let o = Overrides {
            seed: Some(9),
            sample_n: Some(5),
            model: Some(ModelKind::Lr),
            ..Default::default()
        };
        let cfg2 = PipelineConfig::parse(MINIMAL, &base(), &o).unwrap();
        assert_eq!(
            (cfg2.seed, cfg2.sample_n, cfg2.model),
            (9, 5, ModelKind::Lr)
        );
        assert_ne!(cfg.hash(), cfg2.hash());
    }

    #[test]
    fn missing_ontology_names_field() {
        let text = MINIMAL.replace("ontology = \"ontology.tsv\"\n", "");
        match PipelineConfig::parse(&text, &base(), &Overrides::default()).unwrap_err() {
            Error::Config { field, .. } => assert_eq!(field, "ontology"),
            e => panic!("unexpected {e}"),
        }
        let text = MINIMAL.replace("ontology.tsv", "nope.tsv");
        let err = PipelineConfig::parse(&text, &base(), &Overrides::default()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("ontology"));
    }

    #[test]
    fn seed_is_mandatory() {
        let text = MINIMAL.replace("seed = 1\n", "");
        let err = PipelineConfig::parse(&text, &base(), &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("seed"));
    }

    #[test]
    fn rejects_bad_ranges() {
        let text = format!("{MINIMAL}ngram_max = 4\n");
        assert!(PipelineConfig::parse(&text, &base(), &Overrides::default()).is_err());
        let text = format!("{MINIMAL}train_fraction = 1.0\n");
        assert!(PipelineConfig::parse(&text, &base(), &Overrides::default()).is_err());
        let text = format!("{MINIMAL}colour = \"red\"\n");
        assert!(PipelineConfig::parse(&text, &base(), &Overrides::default()).is_err());
    }
}
