//! Drug lexicon: aliases (slang, brand and chemical names) mapped to a
//! canonical entity, its drug class and one of eight supercategories.
//!
//! The on-disk form is a four-column TSV:
//!
//! ```text
//! # canonical<TAB>drug_class<TAB>supercategory<TAB>aliases
//! Heroin<TAB>Opiate<TAB>Heroin<TAB>heroin|dope|china white
//! ```

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::tokenize;
use crate::error::{Error, Result};

const BUNDLED_ONTOLOGY: &str = include_str!("../data/ontology.tsv");

/// The eight broad drug categories, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DrugCategory {
    Heroin,
    SyntheticHeroin,
    PharmaceuticalFentanyl,
    NonPharmaceuticalFentanyl,
    Fentanyl,
    Oxycodone,
    Kratom,
    Opium,
}

impl DrugCategory {
    pub const ALL: [DrugCategory; 8] = [
        DrugCategory::Heroin,
        DrugCategory::SyntheticHeroin,
        DrugCategory::PharmaceuticalFentanyl,
        DrugCategory::NonPharmaceuticalFentanyl,
        DrugCategory::Fentanyl,
        DrugCategory::Oxycodone,
        DrugCategory::Kratom,
        DrugCategory::Opium,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Human-readable name, e.g. "Non-Pharmaceutical Fentanyl".
    pub fn display_name(self) -> &'static str {
        match self {
            DrugCategory::Heroin => "Heroin",
            DrugCategory::SyntheticHeroin => "Synthetic Heroin",
            DrugCategory::PharmaceuticalFentanyl => "Pharmaceutical Fentanyl",
            DrugCategory::NonPharmaceuticalFentanyl => "Non-Pharmaceutical Fentanyl",
            DrugCategory::Fentanyl => "Fentanyl",
            DrugCategory::Oxycodone => "Oxycodone",
            DrugCategory::Kratom => "Kratom",
            DrugCategory::Opium => "Opium",
        }
    }
}

impl fmt::Display for DrugCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for DrugCategory {
    type Err = String;

    /// Accepts either the variant name or the display name, ignoring case,
    /// spaces, hyphens and underscores.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, ' ' | '-' | '_'))
            .flat_map(char::to_lowercase)
            .collect();
        DrugCategory::ALL
            .into_iter()
            .find(|c| format!("{c:?}").to_lowercase() == key)
            .ok_or_else(|| format!("unknown supercategory `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologyEntry {
    pub canonical: String,
    /// Normalized (tokenized, space-joined) aliases; always includes the
    /// canonical name itself.
    pub aliases: Vec<String>,
    pub drug_class: String,
    pub supercategory: DrugCategory,
}

/// Result of a successful alias lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution<'a> {
    pub canonical: &'a str,
    pub drug_class: &'a str,
    pub category: DrugCategory,
}

#[derive(Debug, Clone, Default)]
pub struct Ontology {
    entries: Vec<OntologyEntry>,
    alias_index: HashMap<String, usize>,
    max_alias_tokens: usize,
}

/// Lowercases and re-tokenizes an alias so lookups agree with the tokenizer.
pub fn normalize_alias(alias: &str) -> String {
    tokenize(alias).joined()
}

impl Ontology {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// The starter lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_ONTOLOGY, "bundled ontology").expect("bundled ontology is valid")
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut ontology = Ontology::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols.len() != 4 {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    None,
                    format!("expected 4 tab-separated columns, found {}", cols.len()),
                ));
            }
            let (canonical, drug_class, supercategory, aliases) =
                (cols[0], cols[1], cols[2], cols[3]);
            if canonical.is_empty() {
                return Err(Error::parse(
                    source_name,
                    line_no,
                    Some("canonical"),
                    "empty",
                ));
            }
            let supercategory: DrugCategory = supercategory.parse().map_err(|m: String| {
                Error::parse(source_name, line_no, Some("supercategory"), m)
            })?;
            let mut entry = OntologyEntry {
                canonical: canonical.to_owned(),
                aliases: Vec::new(),
                drug_class: drug_class.to_owned(),
                supercategory,
            };
            let raw_aliases = std::iter::once(canonical).chain(aliases.split('|').map(str::trim));
            for raw in raw_aliases {
                let alias = normalize_alias(raw);
                if alias.is_empty() {
                    return Err(Error::parse(
                        source_name,
                        line_no,
                        Some("aliases"),
                        format!("alias `{raw}` is empty after tokenization"),
                    ));
                }
                if entry.aliases.contains(&alias) {
                    continue;
                }
                if let Some(&other) = ontology.alias_index.get(&alias) {
                    return Err(Error::parse(
                        source_name,
                        line_no,
                        Some("aliases"),
                        format!(
                            "alias `{alias}` already belongs to `{}`",
                            ontology.entries[other].canonical
                        ),
                    ));
                }
                entry.aliases.push(alias);
            }
            let id = ontology.entries.len();
            for alias in &entry.aliases {
                let n_tokens = alias.split(' ').count();
                ontology.max_alias_tokens = ontology.max_alias_tokens.max(n_tokens);
                ontology.alias_index.insert(alias.clone(), id);
            }
            ontology.entries.push(entry);
        }
        Ok(ontology)
    }

    pub fn entries(&self) -> &[OntologyEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn alias_count(&self) -> usize {
        self.alias_index.len()
    }

    /// Longest alias length, in tokens.
    pub fn max_alias_tokens(&self) -> usize {
        self.max_alias_tokens
    }

    /// Case-insensitive exact alias lookup.
    pub fn resolve(&self, alias: &str) -> Option<Resolution<'_>> {
        self.lookup_normalized(&normalize_alias(alias))
    }

    /// Lookup of an alias that is already tokenized and space-joined.
    pub fn lookup_normalized(&self, alias: &str) -> Option<Resolution<'_>> {
        self.alias_index.get(alias).map(|&id| {
            let e = &self.entries[id];
            Resolution {
                canonical: &e.canonical,
                drug_class: &e.drug_class,
                category: e.supercategory,
            }
        })
    }

    pub fn entry_for_alias(&self, alias: &str) -> Option<&OntologyEntry> {
        self.alias_index.get(alias).map(|&id| &self.entries[id])
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    #[test]
    fn heroin_row_with_slang() {
        let ont =
            Ontology::parse("Heroin\tOpiate\tHeroin\theroin|dope|china white\n", "t").unwrap();
        assert_eq!(ont.len(), 1);
        assert_eq!(ont.entries()[0].aliases, ["heroin", "dope", "china white"]);
        let r = ont.resolve("dope").unwrap();
        assert_eq!(
            (r.canonical, r.drug_class, r.category),
            ("Heroin", "Opiate", DrugCategory::Heroin)
        );
        assert_eq!(ont.resolve("DOPE"), ont.resolve("dope"));
        assert_eq!(ont.resolve("China  White").unwrap().canonical, "Heroin");
        assert!(ont.resolve("aspirin").is_none());
    }

    #[test]
    fn empty_file_misses_everything() {
        let ont = Ontology::parse("", "t").unwrap();
        assert!(ont.is_empty());
        assert!(ont.resolve("heroin").is_none());
        let ont = Ontology::parse("# only a comment\n\n", "t").unwrap();
        assert!(ont.is_empty());
    }

    #[test]
    fn duplicate_alias_reports_second_row() {
        let text = "Heroin\tOpiate\tHeroin\tdope\nKratom\tAlkaloid\tKratom\tkratom|dope\n";
        match Ontology::parse(text, "t").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn bad_rows_are_rejected() {
        assert!(matches!(
            Ontology::parse("X\tOpiate\tCocaine\tx\n", "t"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Ontology::parse("\n\nX\tOpiate\tHeroin\tx|!!\n", "t"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(Ontology::parse("X\tOpiate\tHeroin\n", "t").is_err());
    }

    #[test]
    fn category_names_parse_both_forms() {
        for c in DrugCategory::ALL {
            assert_eq!(c.display_name().parse::<DrugCategory>().unwrap(), c);
            assert_eq!(format!("{c:?}").parse::<DrugCategory>().unwrap(), c);
        }
    }

    #[test]
    fn bundled_ontology_covers_all_categories() {
        let ont = Ontology::bundled();
        let canon: BTreeSet<_> = ont.entries().iter().map(|e| e.canonical.as_str()).collect();
        assert!(canon.len() >= 90, "only {} entities", canon.len());
        let cats: BTreeSet<_> = ont.entries().iter().map(|e| e.supercategory).collect();
        assert_eq!(cats.len(), 8);
        for name in [
            "heroin",
            "dope",
            "china white",
            "kratom",
            "oxycodone",
            "fentanyl",
            "opium",
            "u-47700",
        ] {
            assert!(ont.resolve(name).is_some(), "{name}");
        }
    }
}
