//! Per-category sampling, sentiment/emotion tables and the grouped bar chart.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Post;
use crate::error::{Error, Result};
use crate::labeling::{EmotionLabel, SentimentLabel};
use crate::ner::{categorize, first_category};
use crate::ontology::{DrugCategory, Ontology};

/// How a post mentioning several categories is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assignment {
    /// The post counts toward every category it mentions.
    #[default]
    MultiLabel,
    /// Only the category of the first mention counts.
    FirstMention,
}

impl std::str::FromStr for Assignment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "multi-label" | "multi" => Ok(Assignment::MultiLabel),
            "first-mention" | "first" => Ok(Assignment::FirstMention),
            _ => Err(format!(
                "unknown assignment `{s}` (expected multi-label or first-mention)"
            )),
        }
    }
}

/// Posts per category, in corpus order. Categories without posts are absent.
pub fn group_by_category<'a>(
    posts: impl IntoIterator<Item = &'a Post>,
    ontology: &Ontology,
    assignment: Assignment,
) -> BTreeMap<DrugCategory, Vec<&'a Post>> {
    let mut groups: BTreeMap<DrugCategory, Vec<&Post>> = BTreeMap::new();
    for post in posts {
        match assignment {
            Assignment::MultiLabel => {
                for c in categorize(post, ontology) {
                    groups.entry(c).or_default().push(post);
                }
            }
            Assignment::FirstMention => {
                if let Some(c) = first_category(post, ontology) {
                    groups.entry(c).or_default().push(post);
                }
            }
        }
    }
    groups
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategorySample<'a> {
    pub per_category: BTreeMap<DrugCategory, Vec<&'a Post>>,
    pub warnings: Vec<String>,
}

/// Uniform sample without replacement of `min(n, available)` posts per
/// category. Each category draws from its own stream of a ChaCha generator
/// seeded with `seed`; sampled posts keep corpus order.
pub fn sample_per_category<'a>(
    groups: &BTreeMap<DrugCategory, Vec<&'a Post>>,
    n: usize,
    seed: u64,
) -> Result<CategorySample<'a>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sample size must be at least 1".into(),
        ));
    }
    let mut per_category = BTreeMap::new();
    let mut warnings = Vec::new();
    for (&category, posts) in groups {
        let chosen = if posts.len() <= n {
            if posts.len() < n {
                warnings.push(format!(
                    "{category}: only {} posts available, sampling all of them instead of {n}",
                    posts.len()
                ));
            }
            posts.clone()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(category.index() as u64);
            let mut idx = rand::seq::index::sample(&mut rng, posts.len(), n).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| posts[i]).collect()
        };
        per_category.insert(category, chosen);
    }
    Ok(CategorySample {
        per_category,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentimentReportRow {
    pub category: DrugCategory,
    pub positive: u64,
    pub negative: u64,
    pub neutral: u64,
    pub sample_size: u64,
}

/// One row per category, all eight in reporting order.
pub fn sentiment_table(
    sample: &BTreeMap<DrugCategory, Vec<&Post>>,
    labels: &HashMap<String, SentimentLabel>,
) -> Result<Vec<SentimentReportRow>> {
    DrugCategory::ALL
        .into_iter()
        .map(|category| {
            let mut row = SentimentReportRow {
                category,
                positive: 0,
                negative: 0,
                neutral: 0,
                sample_size: 0,
            };
            for post in sample.get(&category).map(Vec::as_slice).unwrap_or_default() {
                match labels.get(&post.id) {
                    Some(SentimentLabel::Positive) => row.positive += 1,
                    Some(SentimentLabel::Negative) => row.negative += 1,
                    Some(SentimentLabel::Neutral) => row.neutral += 1,
                    None => return Err(Error::MissingLabel(post.id.clone())),
                }
                row.sample_size += 1;
            }
            Ok(row)
        })
        .collect()
}

pub fn sentiment_csv(rows: &[SentimentReportRow]) -> String {
    let mut out = String::from("category,positive,negative,neutral,sample_size\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.category, r.positive, r.negative, r.neutral, r.sample_size
        );
    }
    out
}

/// Emotion counts with all seven emotions present, in declaration order.
pub type EmotionHistogram = BTreeMap<EmotionLabel, u64>;

pub fn histogram<'a>(labels: impl IntoIterator<Item = &'a EmotionLabel>) -> EmotionHistogram {
    let mut h: EmotionHistogram = EmotionLabel::ALL.into_iter().map(|e| (e, 0)).collect();
    for &l in labels {
        *h.entry(l).or_insert(0) += 1;
    }
    h
}

/// Adds `other` into `into`; merging partial histograms is associative.
pub fn merge_histograms(into: &mut EmotionHistogram, other: &EmotionHistogram) {
    for (&e, &n) in other {
        *into.entry(e).or_insert(0) += n;
    }
}

/// The `k` most frequent emotions with non-zero count; ties go to the emotion
/// declared first.
pub fn top_k(hist: &EmotionHistogram, k: usize) -> Vec<EmotionLabel> {
    let mut ranked: Vec<(EmotionLabel, u64)> = hist
        .iter()
        .filter(|(_, &n)| n > 0)
        .map(|(&e, &n)| (e, n))
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.into_iter().take(k).map(|(e, _)| e).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmotionReportRow {
    pub category: DrugCategory,
    pub distribution: EmotionHistogram,
    pub top3: Vec<EmotionLabel>,
}

/// Histogram and top-`k` emotions for each category present in `labels`.
pub fn top_emotions(
    labels: &BTreeMap<DrugCategory, Vec<EmotionLabel>>,
    k: usize,
) -> Vec<EmotionReportRow> {
    labels
        .iter()
        .map(|(&category, emotions)| {
            let distribution = histogram(emotions);
            let top3 = top_k(&distribution, k);
            EmotionReportRow {
                category,
                distribution,
                top3,
            }
        })
        .collect()
}

pub fn emotion_csv(rows: &[EmotionReportRow]) -> String {
    let mut out = String::from("category,emotion,count\n");
    for r in rows {
        for e in EmotionLabel::ALL {
            let _ = writeln!(
                out,
                "{},{},{}",
                r.category,
                e,
                r.distribution.get(&e).copied().unwrap_or(0)
            );
        }
    }
    out
}

const PALETTE: [&str; 7] = [
    "#f1c40f", // Joy
    "#2c7bb6", // Sadness
    "#d7191c", // Anger
    "#e377c2", // Love
    "#7b3294", // Fear
    "#1a9641", // Thankfulness
    "#fdae61", // Surprise
];

const BAR_WIDTH: f64 = 14.0;
const GROUP_GAP: f64 = 28.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_TOP: f64 = 50.0;
const PLOT_HEIGHT: f64 = 260.0;
const LEGEND_WIDTH: f64 = 150.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders a grouped bar chart: one group per row, seven bars per group in
/// fixed emotion order. Pure function of `rows`.
pub fn render_chart(rows: &[EmotionReportRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument(
            "chart needs at least one row".into(),
        ));
    }
    let max = rows
        .iter()
        .flat_map(|r| r.distribution.values())
        .copied()
        .max()
        .unwrap_or(0)
        .max(1);
    let step = max.div_ceil(5);
    let y_max = (step * 5) as f64;
    let group_width = 7.0 * BAR_WIDTH;
    let plot_width = rows.len() as f64 * (group_width + GROUP_GAP) + GROUP_GAP;
    let width = MARGIN_LEFT + plot_width + LEGEND_WIDTH;
    let height = MARGIN_TOP + PLOT_HEIGHT + 80.0;
    let base_y = MARGIN_TOP + PLOT_HEIGHT;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect class="background" x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text class="title" x="{:.2}" y="24" text-anchor="middle" font-size="15">Emotions by drug category</text>"#,
        MARGIN_LEFT + plot_width / 2.0
    );

    // Y axis with ticks.
    let _ = writeln!(
        svg,
        r#"<line class="axis" x1="{MARGIN_LEFT:.2}" y1="{MARGIN_TOP:.2}" x2="{MARGIN_LEFT:.2}" y2="{base_y:.2}" stroke="black"/>"#
    );
    for i in 0..=5u64 {
        let value = step * i;
        let y = base_y - value as f64 / y_max * PLOT_HEIGHT;
        let _ = writeln!(
            svg,
            r#"<line class="tick" x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT:.2}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text class="tick-label" x="{:.2}" y="{:.2}" text-anchor="end">{value}</text>"#,
            MARGIN_LEFT - 7.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text class="axis-label" x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">Posts</text>"#,
        MARGIN_TOP + PLOT_HEIGHT / 2.0,
        MARGIN_TOP + PLOT_HEIGHT / 2.0
    );
    let _ = writeln!(
        svg,
        r#"<line class="axis" x1="{MARGIN_LEFT:.2}" y1="{base_y:.2}" x2="{:.2}" y2="{base_y:.2}" stroke="black"/>"#,
        MARGIN_LEFT + plot_width
    );

    for (g, row) in rows.iter().enumerate() {
        let x0 = MARGIN_LEFT + GROUP_GAP + g as f64 * (group_width + GROUP_GAP);
        let category = escape(row.category.display_name());
        for (i, emotion) in EmotionLabel::ALL.into_iter().enumerate() {
            let count = row.distribution.get(&emotion).copied().unwrap_or(0);
            let h = count as f64 / y_max * PLOT_HEIGHT;
            let _ = writeln!(
                svg,
                r#"<rect class="bar" data-category="{category}" data-emotion="{emotion}" data-count="{count}" x="{:.2}" y="{:.2}" width="{BAR_WIDTH:.2}" height="{h:.2}" fill="{}"/>"#,
                x0 + i as f64 * BAR_WIDTH,
                base_y - h,
                PALETTE[i]
            );
        }
        let _ = writeln!(
            svg,
            r#"<text class="group-label" x="{:.2}" y="{:.2}" text-anchor="middle">{category}</text>"#,
            x0 + group_width / 2.0,
            base_y + 18.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text class="axis-label" x="{:.2}" y="{:.2}" text-anchor="middle">Drug category</text>"#,
        MARGIN_LEFT + plot_width / 2.0,
        base_y + 45.0
    );

    let legend_x = MARGIN_LEFT + plot_width + 20.0;
    for (i, emotion) in EmotionLabel::ALL.into_iter().enumerate() {
        let y = MARGIN_TOP + i as f64 * 20.0;
        let _ = writeln!(
            svg,
            r#"<rect class="legend-swatch" x="{legend_x:.2}" y="{y:.2}" width="12" height="12" fill="{}"/>"#,
            PALETTE[i]
        );
        let _ = writeln!(
            svg,
            r#"<text class="legend-label" x="{:.2}" y="{:.2}">{emotion}</text>"#,
            legend_x + 18.0,
            y + 10.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_chart(rows: &[EmotionReportRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let svg = render_chart(rows)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Source;
    use EmotionLabel::*;

    fn posts(n: usize) -> Vec<Post> {
        (0..n)
            .map(|i| Post::new(format!("p{i}"), Source::Reddit, "", "x"))
            .collect()
    }

    #[test]
    fn samples_exactly_n_without_replacement() {
        let ps = posts(876);
        let groups = BTreeMap::from([(
            DrugCategory::PharmaceuticalFentanyl,
            ps.iter().collect::<Vec<_>>(),
        )]);
        let s = sample_per_category(&groups, 800, 42).unwrap();
        let got = &s.per_category[&DrugCategory::PharmaceuticalFentanyl];
        assert_eq!(got.len(), 800);
        let mut ids: Vec<_> = got.iter().map(|p| &p.id).collect();
        ids.dedup();
        assert_eq!(ids.len(), 800);
        assert!(s.warnings.is_empty());
        assert_eq!(sample_per_category(&groups, 800, 42).unwrap(), s);
        assert_ne!(sample_per_category(&groups, 800, 43).unwrap(), s);
    }

    #[test]
    fn small_category_is_kept_whole_with_warning() {
        let ps = posts(5);
        let groups = BTreeMap::from([(DrugCategory::Opium, ps.iter().collect::<Vec<_>>())]);
        let s = sample_per_category(&groups, 800, 1).unwrap();
        assert_eq!(s.per_category[&DrugCategory::Opium].len(), 5);
        assert_eq!(s.warnings.len(), 1);
        assert!(sample_per_category(&groups, 0, 1).is_err());
    }

    #[test]
    fn opium_row_counts() {
        let ps = posts(800);
        let labels: HashMap<String, SentimentLabel> = ps
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let l = if i < 481 {
                    SentimentLabel::Positive
                } else if i < 481 + 218 {
                    SentimentLabel::Negative
                } else {
                    SentimentLabel::Neutral
                };
                (p.id.clone(), l)
            })
            .collect();
        let sample = BTreeMap::from([(DrugCategory::Opium, ps.iter().collect::<Vec<_>>())]);
        let rows = sentiment_table(&sample, &labels).unwrap();
        assert_eq!(rows.len(), 8);
        let opium = rows
            .iter()
            .find(|r| r.category == DrugCategory::Opium)
            .unwrap();
        assert_eq!(
            (
                opium.positive,
                opium.negative,
                opium.neutral,
                opium.sample_size
            ),
            (481, 218, 101, 800)
        );
        let heroin = rows[0];
        assert_eq!(
            (
                heroin.positive,
                heroin.negative,
                heroin.neutral,
                heroin.sample_size
            ),
            (0, 0, 0, 0)
        );
    }

    #[test]
    fn missing_label_names_post() {
        let ps = posts(2);
        let sample = BTreeMap::from([(DrugCategory::Kratom, ps.iter().collect::<Vec<_>>())]);
        let labels = HashMap::from([("p0".to_string(), SentimentLabel::Neutral)]);
        match sentiment_table(&sample, &labels) {
            Err(Error::MissingLabel(id)) => assert_eq!(id, "p1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn top_three_with_tie_rule() {
        let mut labels = Vec::new();
        for (e, n) in [(Sadness, 10), (Love, 7), (Joy, 5), (Fear, 5)] {
            labels.extend(std::iter::repeat_n(e, n));
        }
        let rows = top_emotions(&BTreeMap::from([(DrugCategory::Opium, labels)]), 3);
        assert_eq!(rows[0].top3, [Sadness, Love, Joy]);
        assert!(top_k(&histogram(&[]), 3).is_empty());
        assert_eq!(top_k(&histogram(&[Fear, Fear]), 3), [Fear]);
    }

    #[test]
    fn histograms_merge() {
        let mut a = histogram(&[Joy, Fear]);
        merge_histograms(&mut a, &histogram(&[Joy]));
        assert_eq!(a, histogram(&[Joy, Joy, Fear]));
    }

    #[test]
    fn csv_headers() {
        assert!(sentiment_csv(&[]).starts_with("category,positive,negative,neutral,sample_size\n"));
        let rows = top_emotions(&BTreeMap::from([(DrugCategory::Kratom, vec![Love])]), 3);
        let csv = emotion_csv(&rows);
        assert_eq!(csv.lines().count(), 8);
        assert!(csv.contains("Kratom,Love,1\n"));
    }

    #[test]
    fn chart_requires_rows() {
        assert!(render_chart(&[]).is_err());
    }
}
