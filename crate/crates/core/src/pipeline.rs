//! Stage runner behind the command-line front end.
//!
//! Every stage reads its inputs from the configured paths (and, for `eval`
//! and `report`, the model files written by `train`), writes artifacts into
//! the output directory and updates `manifest.json`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifier::{
    evaluate, stratified_split, train_lr, train_nb, Classifier, Model, ModelFile,
};
use crate::config::{ModelKind, PipelineConfig};
use crate::corpus::{load_posts, write_posts_jsonl, Corpus, Post, PostFormat, Source};
use crate::error::{Error, Result};
use crate::labeling::{
    emotion_label, polarity_of_tokens, sentiment_label, ClassLabel, EmotionLabel, HashtagMap,
    LabelRecord, LabeledExample, PolarityLexicon, Provenance, SentimentLabel,
};
use crate::listing::{parse_listing, read_listing_records};
use crate::ner::{recognize_tokens, MentionRecord};
use crate::ontology::{DrugCategory, Ontology};
use crate::report::{
    emotion_csv, group_by_category, render_chart, sample_per_category, sentiment_csv,
    sentiment_table, top_emotions, EmotionReportRow, SentimentReportRow,
};
use crate::topics::{top_terms, Stopwords, Vocabulary, VocabularyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Ingest,
    ParseListings,
    Ner,
    Topics,
    Weaklabel,
    Train,
    Eval,
    Report,
    Pipeline,
}

impl Stage {
    /// Stages run by `pipeline`, in order.
    pub const ORDER: [Stage; 8] = [
        Stage::Ingest,
        Stage::ParseListings,
        Stage::Ner,
        Stage::Topics,
        Stage::Weaklabel,
        Stage::Train,
        Stage::Eval,
        Stage::Report,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::ParseListings => "parse-listings",
            Stage::Ner => "ner",
            Stage::Topics => "topics",
            Stage::Weaklabel => "weaklabel",
            Stage::Train => "train",
            Stage::Eval => "eval",
            Stage::Report => "report",
            Stage::Pipeline => "pipeline",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Stage::ORDER
            .into_iter()
            .chain([Stage::Pipeline])
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown subcommand `{s}`"))
    }
}

/// Which weak-label task a model belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Sentiment,
    Emotion,
}

impl Task {
    pub const ALL: [Task; 2] = [Task::Sentiment, Task::Emotion];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Sentiment => "sentiment",
            Task::Emotion => "emotion",
        }
    }

    pub fn model_file(self) -> String {
        format!("{}_model.json", self.as_str())
    }
}

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

/// Reproduction record written next to the artifacts. Contains no timestamps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config_hash: String,
    pub config: serde_json::Value,
    pub inputs: BTreeMap<String, InputRecord>,
    pub stages: Vec<String>,
    /// Artifact file name → SHA-256 of its bytes.
    pub artifacts: BTreeMap<String, String>,
}

/// Outcome of one invocation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    /// Artifacts written by this invocation, with their SHA-256.
    pub artifacts: BTreeMap<String, String>,
    /// Human-readable progress and warnings.
    pub log: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

struct Inputs {
    corpus: Corpus,
    ontology: Ontology,
    lexicon: PolarityLexicon,
    hashtags: HashtagMap,
    stopwords: Stopwords,
}

struct Context<'a> {
    cfg: &'a PipelineConfig,
    inputs: Option<Inputs>,
    report: RunReport,
}

impl<'a> Context<'a> {
    fn inputs(&mut self) -> Result<&Inputs> {
        if self.inputs.is_none() {
            let cfg = self.cfg;
            let stopwords = match &cfg.stopwords {
                Some(p) => Stopwords::parse(&read_text(p)?),
                None => Stopwords::english(),
            };
            self.inputs = Some(Inputs {
                corpus: load_posts(&cfg.corpus, PostFormat::from_path(&cfg.corpus))?,
                ontology: Ontology::load(&cfg.ontology)?,
                lexicon: PolarityLexicon::load(&cfg.lexicon)?,
                hashtags: HashtagMap::load(&cfg.hashtags)?,
                stopwords,
            });
        }
        Ok(self.inputs.as_ref().expect("just loaded"))
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.cfg.output_dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::Output { path, source: e })?;
        self.report
            .artifacts
            .insert(name.to_owned(), sha256_hex(bytes));
        Ok(())
    }

    fn log(&mut self, line: impl Into<String>) {
        self.report.log.push(line.into());
    }
}

fn jsonl<T: Serialize>(records: impl IntoIterator<Item = T>) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, &r)?;
        out.push(b'\n');
    }
    Ok(out)
}

fn pretty_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Runs `stage` (or every stage for [`Stage::Pipeline`]) and updates the
/// manifest in the output directory.
pub fn run_subcommand(stage: Stage, cfg: &PipelineConfig) -> Result<RunReport> {
    fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::Output {
        path: cfg.output_dir.clone(),
        source: e,
    })?;
    let mut ctx = Context {
        cfg,
        inputs: None,
        report: RunReport::default(),
    };
    let stages: Vec<Stage> = match stage {
        Stage::Pipeline => Stage::ORDER.to_vec(),
        s => vec![s],
    };
    for &s in &stages {
        match s {
            Stage::Ingest => ingest(&mut ctx)?,
            Stage::ParseListings => {
                if stage == Stage::Pipeline && cfg.listings.is_none() {
                    ctx.log("parse-listings: skipped, no `listings` configured");
                    continue;
                }
                parse_listings(&mut ctx)?
            }
            Stage::Ner => ner(&mut ctx)?,
            Stage::Topics => topics(&mut ctx)?,
            Stage::Weaklabel => weaklabel(&mut ctx)?,
            Stage::Train => train(&mut ctx)?,
            Stage::Eval => eval(&mut ctx)?,
            Stage::Report => report(&mut ctx)?,
            Stage::Pipeline => unreachable!("expanded above"),
        }
    }
    write_manifest(&mut ctx, &stages)?;
    Ok(ctx.report)
}

fn write_manifest(ctx: &mut Context<'_>, stages: &[Stage]) -> Result<()> {
    let cfg = ctx.cfg;
    let config_hash = cfg.hash();
    let path = cfg.output_dir.join(MANIFEST);
    let previous: Option<Manifest> = fs::read(&path)
        .ok()
        .and_then(|b| serde_json::from_slice::<Manifest>(&b).ok())
        .filter(|m| m.config_hash == config_hash);

    let mut inputs = BTreeMap::new();
    let mut named: Vec<(&str, &PathBuf)> = vec![
        ("corpus", &cfg.corpus),
        ("ontology", &cfg.ontology),
        ("lexicon", &cfg.lexicon),
        ("hashtags", &cfg.hashtags),
    ];
    if let Some(p) = &cfg.listings {
        named.push(("listings", p));
    }
    if let Some(p) = &cfg.stopwords {
        named.push(("stopwords", p));
    }
    for (name, p) in named {
        inputs.insert(
            name.to_owned(),
            InputRecord {
                path: p.display().to_string(),
                sha256: sha256_hex(&read_bytes(p)?),
            },
        );
    }

    let (mut done, mut artifacts) = match previous {
        Some(m) => (m.stages, m.artifacts),
        None => (Vec::new(), BTreeMap::new()),
    };
    for s in stages {
        if !done.iter().any(|d| d == s.as_str()) {
            done.push(s.as_str().to_owned());
        }
    }
    done.sort_by_key(|d| d.parse::<Stage>().map(|s| s as usize).unwrap_or(usize::MAX));
    artifacts.extend(ctx.report.artifacts.clone());

    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        seed: cfg.seed,
        config_hash,
        config: serde_json::to_value(cfg)?,
        inputs,
        stages: done,
        artifacts,
    };
    let bytes = pretty_json(&manifest)?;
    fs::write(&path, bytes).map_err(|e| Error::Output { path, source: e })
}

fn ingest(ctx: &mut Context<'_>) -> Result<()> {
    let mut out = Vec::new();
    let corpus = &ctx.inputs()?.corpus;
    write_posts_jsonl(corpus, &mut out)?;
    let msg = format!("ingest: {} posts", corpus.len());
    ctx.write("corpus.jsonl", &out)?;
    ctx.log(msg);
    Ok(())
}

fn parse_listings(ctx: &mut Context<'_>) -> Result<()> {
    let path =
        ctx.cfg.listings.clone().ok_or_else(|| {
            Error::config("listings", "missing required field for parse-listings")
        })?;
    let name = path.display().to_string();
    let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
    let records = read_listing_records(BufReader::new(file), &name)?;
    let ontology = &ctx.inputs()?.ontology;
    let mut parsed = Vec::with_capacity(records.len());
    let mut warnings = Vec::new();
    for (line, record) in &records {
        let p = parse_listing(record, ontology)
            .map_err(|e| Error::parse(&name, *line, Some("name"), e.to_string()))?;
        for w in &p.warnings {
            warnings.push(format!("{name}:{line}: {w}"));
        }
        parsed.push(p);
    }
    let bytes = jsonl(&parsed)?;
    ctx.write("listings.jsonl", &bytes)?;
    ctx.log(format!("parse-listings: {} listings", parsed.len()));
    for w in warnings {
        ctx.log(format!("warning: {w}"));
    }
    Ok(())
}

fn ner(ctx: &mut Context<'_>) -> Result<()> {
    let inputs = ctx.inputs()?;
    let mut out = Vec::new();
    let mut count = 0usize;
    for post in &inputs.corpus.posts {
        let mentions = recognize_tokens(&post.tokens(), &inputs.ontology);
        for m in &mentions {
            serde_json::to_writer(&mut out, &MentionRecord::new(&post.id, m))?;
            out.push(b'\n');
        }
        count += mentions.len();
    }
    ctx.write("mentions.jsonl", &out)?;
    ctx.log(format!("ner: {count} mentions"));
    Ok(())
}

/// Collection key for topic grouping: the collection, or the source name when
/// the collection is empty.
pub fn collection_key(post: &Post) -> &str {
    if post.collection.is_empty() {
        post.source.as_str()
    } else {
        &post.collection
    }
}

fn topics(ctx: &mut Context<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let inputs = ctx.inputs()?;
    let mut groups: BTreeMap<&str, Vec<_>> = BTreeMap::new();
    for post in &inputs.corpus.posts {
        groups
            .entry(collection_key(post))
            .or_default()
            .push(post.tokens());
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["collection", "rank", "term", "score"])?;
    for (collection, docs) in &groups {
        let opts = VocabularyOptions::new(cfg.ngram_min, cfg.ngram_max, cfg.min_df)
            .with_stopwords(inputs.stopwords.clone());
        let vocab = Vocabulary::build(docs, &opts)?;
        for (rank, t) in top_terms(docs, &vocab, cfg.top_k).iter().enumerate() {
            w.write_record([
                collection.to_string(),
                (rank + 1).to_string(),
                t.term.clone(),
                format!("{:.6}", t.score),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Output {
        path: cfg.output_dir.join("topics.csv"),
        source: e.into_error(),
    })?;
    let n = groups.len();
    ctx.write("topics.csv", &bytes)?;
    ctx.log(format!("topics: {n} collections"));
    Ok(())
}

/// Lexicon-labeled sentiment examples over every non-Twitter post.
pub fn sentiment_examples(
    corpus: &Corpus,
    lexicon: &PolarityLexicon,
) -> Result<Vec<LabeledExample<SentimentLabel>>> {
    corpus
        .posts
        .iter()
        .filter(|p| p.source != Source::Twitter)
        .map(|p| {
            let tokens = p.tokens();
            let label = sentiment_label(polarity_of_tokens(&tokens.tokens, lexicon))?;
            Ok(LabeledExample::new(
                p.id.clone(),
                tokens,
                label,
                Provenance::Weak,
            ))
        })
        .collect()
}

/// Hashtag-labeled emotion examples over Twitter posts, tokenized from the
/// cleaned text. Also returns how many tweets were discarded for carrying
/// hashtags of several emotions.
pub fn emotion_examples(
    corpus: &Corpus,
    map: &HashtagMap,
) -> (Vec<(LabeledExample<EmotionLabel>, String)>, usize) {
    let mut out = Vec::new();
    let mut conflicts = 0;
    for p in corpus.posts.iter().filter(|p| p.source == Source::Twitter) {
        match emotion_label(p, map) {
            Some((label, text)) => {
                let tokens = crate::corpus::tokenize(&text);
                out.push((
                    LabeledExample::new(p.id.clone(), tokens, label, Provenance::Hashtag),
                    text,
                ));
            }
            None => {
                let n = p
                    .hashtags
                    .iter()
                    .filter_map(|h| map.emotion_of(h))
                    .collect::<std::collections::BTreeSet<_>>()
                    .len();
                if n > 1 {
                    conflicts += 1;
                }
            }
        }
    }
    (out, conflicts)
}

fn weaklabel(ctx: &mut Context<'_>) -> Result<()> {
    let inputs = ctx.inputs()?;
    let sentiment = sentiment_examples(&inputs.corpus, &inputs.lexicon)?;
    let texts: HashMap<&str, &str> = inputs
        .corpus
        .posts
        .iter()
        .map(|p| (p.id.as_str(), p.text.as_str()))
        .collect();
    let records = sentiment.iter().map(|ex| LabelRecord {
        post_id: ex.id.clone(),
        label: ex.label.to_string(),
        provenance: ex.provenance,
        text: texts[ex.id.as_str()].to_owned(),
    });
    let sent_bytes = jsonl(records)?;
    let (emotion, conflicts) = emotion_examples(&inputs.corpus, &inputs.hashtags);
    let emo_bytes = jsonl(emotion.iter().map(|(ex, text)| LabelRecord {
        post_id: ex.id.clone(),
        label: ex.label.to_string(),
        provenance: ex.provenance,
        text: text.clone(),
    }))?;
    let counts = |labels: Vec<&str>| {
        let mut m: BTreeMap<&str, usize> = BTreeMap::new();
        for l in labels {
            *m.entry(l).or_default() += 1;
        }
        m.iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let msg = format!(
        "weaklabel: {} sentiment labels ({}); {} emotion labels ({}); {conflicts} conflicting tweets discarded",
        sentiment.len(),
        counts(sentiment.iter().map(|e| e.label.name()).collect()),
        emotion.len(),
        counts(emotion.iter().map(|(e, _)| e.label.name()).collect()),
    );
    ctx.write("sentiment_labels.jsonl", &sent_bytes)?;
    ctx.write("emotion_labels.jsonl", &emo_bytes)?;
    ctx.log(msg);
    Ok(())
}

/// Classes present in `examples`, in declaration order of `all`.
fn present_classes<L: ClassLabel + Copy + PartialEq>(
    all: &[L],
    examples: &[LabeledExample<L>],
) -> Vec<L> {
    all.iter()
        .copied()
        .filter(|c| examples.iter().any(|e| e.label == *c))
        .collect()
}

/// Split, vocabulary and fitted model for one task.
pub struct Fitted<L> {
    pub train: Vec<LabeledExample<L>>,
    pub test: Vec<LabeledExample<L>>,
    pub model: Model,
}

/// Stratified split by `cfg.seed`, vocabulary over the training side, then
/// the configured model.
pub fn fit<L: ClassLabel + Copy + PartialEq>(
    all_classes: &[L],
    examples: &[LabeledExample<L>],
    cfg: &PipelineConfig,
) -> Result<Fitted<L>> {
    let (train, test) = stratified_split(examples, cfg.train_fraction, cfg.seed)?;
    let classes = present_classes(all_classes, examples);
    let docs: Vec<_> = train.iter().map(|e| e.tokens.clone()).collect();
    let vocab = Vocabulary::build(
        &docs,
        &VocabularyOptions::new(cfg.ngram_min, cfg.ngram_max, cfg.min_df),
    )?;
    let model = match cfg.model {
        ModelKind::Nb => Model::NaiveBayes(train_nb(&train, &classes, &vocab, cfg.alpha)?),
        ModelKind::Lr => Model::SoftmaxRegression(train_lr(
            &train,
            &classes,
            &vocab,
            cfg.lr_hyperparameters(),
        )?),
    };
    Ok(Fitted { train, test, model })
}

fn task_split<L: ClassLabel + Clone>(
    examples: &[LabeledExample<L>],
    cfg: &PipelineConfig,
) -> Result<Vec<LabeledExample<L>>> {
    Ok(stratified_split(examples, cfg.train_fraction, cfg.seed)?.1)
}

fn task_examples(ctx: &mut Context<'_>, task: Task) -> Result<TaskExamples> {
    let inputs = ctx.inputs()?;
    Ok(match task {
        Task::Sentiment => {
            TaskExamples::Sentiment(sentiment_examples(&inputs.corpus, &inputs.lexicon)?)
        }
        Task::Emotion => TaskExamples::Emotion(
            emotion_examples(&inputs.corpus, &inputs.hashtags)
                .0
                .into_iter()
                .map(|(e, _)| e)
                .collect(),
        ),
    })
}

enum TaskExamples {
    Sentiment(Vec<LabeledExample<SentimentLabel>>),
    Emotion(Vec<LabeledExample<EmotionLabel>>),
}

impl TaskExamples {
    fn len(&self) -> usize {
        match self {
            TaskExamples::Sentiment(v) => v.len(),
            TaskExamples::Emotion(v) => v.len(),
        }
    }
}

fn train(ctx: &mut Context<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    for task in Task::ALL {
        let examples = task_examples(ctx, task)?;
        if examples.len() == 0 {
            ctx.log(format!(
                "train: {task}: no labeled examples, skipped",
                task = task.as_str()
            ));
            continue;
        }
        let (model, n_train) = match &examples {
            TaskExamples::Sentiment(ex) => {
                let f = fit(&SentimentLabel::ALL, ex, cfg)?;
                (f.model, f.train.len())
            }
            TaskExamples::Emotion(ex) => {
                let f = fit(&EmotionLabel::ALL, ex, cfg)?;
                (f.model, f.train.len())
            }
        };
        let mut bytes = Vec::new();
        ModelFile::new(model, cfg.seed).write(&mut bytes)?;
        bytes.push(b'\n');
        ctx.write(&task.model_file(), &bytes)?;
        ctx.log(format!(
            "train: {}: {n_train} training examples",
            task.as_str()
        ));
    }
    Ok(())
}

fn read_model(cfg: &PipelineConfig, task: Task) -> Result<ModelFile> {
    let path = cfg.output_dir.join(task.model_file());
    let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
    ModelFile::read(BufReader::new(file), &path.display().to_string())
}

fn eval(ctx: &mut Context<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    for task in Task::ALL {
        let examples = task_examples(ctx, task)?;
        if examples.len() == 0 {
            ctx.log(format!(
                "eval: {}: no labeled examples, skipped",
                task.as_str()
            ));
            continue;
        }
        let model = read_model(cfg, task)?.model;
        let metrics = match &examples {
            TaskExamples::Sentiment(ex) => evaluate(&model, &task_split(ex, cfg)?)?,
            TaskExamples::Emotion(ex) => evaluate(&model, &task_split(ex, cfg)?)?,
        };
        ctx.write(
            &format!("{}_metrics.json", task.as_str()),
            &pretty_json(&metrics)?,
        )?;
        ctx.write(
            &format!("{}_confusion.csv", task.as_str()),
            metrics.confusion.to_csv().as_bytes(),
        )?;
        ctx.log(format!("eval: {}\n{}", task.as_str(), metrics.summary()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub sample_n: usize,
    pub sentiment: Vec<SentimentReportRow>,
    pub emotion: Vec<EmotionReportRow>,
    pub warnings: Vec<String>,
}

fn predict_map<'p>(
    model: &Model,
    posts: impl IntoIterator<Item = &'p Post>,
) -> HashMap<String, String> {
    posts
        .into_iter()
        .map(|p| (p.id.clone(), model.predict_tokens(&p.tokens()).label))
        .collect()
}

fn report(ctx: &mut Context<'_>) -> Result<()> {
    let cfg = ctx.cfg;
    let sentiment_model = read_model(cfg, Task::Sentiment)?.model;
    let emotion_model = match read_model(cfg, Task::Emotion) {
        Ok(m) => Some(m.model),
        Err(Error::Io { .. }) => None,
        Err(e) => return Err(e),
    };
    let inputs = ctx.inputs()?;
    let mut warnings = Vec::new();

    let reddit = inputs
        .corpus
        .posts
        .iter()
        .filter(|p| p.source != Source::Twitter);
    let groups = group_by_category(reddit, &inputs.ontology, cfg.assignment);
    let sample = sample_per_category(&groups, cfg.sample_n, cfg.seed)?;
    warnings.extend(
        sample
            .warnings
            .iter()
            .map(|w| format!("sentiment sample: {w}")),
    );
    let predicted = predict_map(
        &sentiment_model,
        sample.per_category.values().flatten().copied(),
    );
    let labels = predicted
        .into_iter()
        .map(|(id, l)| {
            let label = l
                .parse::<SentimentLabel>()
                .map_err(|_| Error::UndeclaredClass(l.clone()))?;
            Ok((id, label))
        })
        .collect::<Result<HashMap<_, _>>>()?;
    let sentiment_rows = sentiment_table(&sample.per_category, &labels)?;

    let mut emotion_rows = Vec::new();
    if let Some(model) = &emotion_model {
        let tweets = inputs
            .corpus
            .posts
            .iter()
            .filter(|p| p.source == Source::Twitter);
        let groups = group_by_category(tweets, &inputs.ontology, cfg.assignment);
        let sample = sample_per_category(&groups, cfg.sample_n, cfg.seed)?;
        warnings.extend(
            sample
                .warnings
                .iter()
                .map(|w| format!("emotion sample: {w}")),
        );
        let predicted = predict_map(model, sample.per_category.values().flatten().copied());
        let mut per_category: BTreeMap<DrugCategory, Vec<EmotionLabel>> = BTreeMap::new();
        for (&category, posts) in &sample.per_category {
            let labels = posts
                .iter()
                .map(|p| {
                    let l = &predicted[&p.id];
                    l.parse::<EmotionLabel>()
                        .map_err(|_| Error::UndeclaredClass(l.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            per_category.insert(category, labels);
        }
        emotion_rows = top_emotions(&per_category, 3);
    }

    let file = ReportFile {
        sample_n: cfg.sample_n,
        sentiment: sentiment_rows.clone(),
        emotion: emotion_rows.clone(),
        warnings: warnings.clone(),
    };
    ctx.write(
        "sentiment_report.csv",
        sentiment_csv(&sentiment_rows).as_bytes(),
    )?;
    ctx.write("report.json", &pretty_json(&file)?)?;
    if emotion_rows.is_empty() {
        ctx.log("report: no tweets mention a drug, emotion chart skipped");
    } else {
        ctx.write("emotion_report.csv", emotion_csv(&emotion_rows).as_bytes())?;
        ctx.write("emotions.svg", render_chart(&emotion_rows)?.as_bytes())?;
    }
    ctx.log(format!(
        "report: {} categories sampled for sentiment, {} for emotion",
        sentiment_rows.iter().filter(|r| r.sample_size > 0).count(),
        emotion_rows.len()
    ));
    for w in warnings {
        ctx.log(format!("warning: {w}"));
    }
    Ok(())
}

/// Writes `corpus` as JSONL to `path`.
pub fn write_corpus_file(corpus: &Corpus, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::Output {
        path: path.to_owned(),
        source: e,
    })?;
    let mut w = BufWriter::new(file);
    write_posts_jsonl(corpus, &mut w)?;
    w.flush().map_err(|e| Error::Output {
        path: path.to_owned(),
        source: e,
    })
}
