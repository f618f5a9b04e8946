//! Typed cryptomarket listing records.
//!
//! Input is a flat key/value record (one JSON object per line), not HTML.
//! Optional fields that fail to parse become warnings on the listing and the
//! rest of the record is kept.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::ner::recognize;
use crate::ontology::Ontology;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantityUnit {
    Gram,
    Milligram,
    Kilogram,
    Unit,
}

impl QuantityUnit {
    /// Maps a unit word to its normalized unit; unknown words count as `Unit`.
    pub fn from_word(word: &str) -> QuantityUnit {
        match word.to_ascii_lowercase().as_str() {
            "g" | "gr" | "gram" | "grams" => QuantityUnit::Gram,
            "mg" | "milligram" | "milligrams" => QuantityUnit::Milligram,
            "kg" | "kilogram" | "kilograms" => QuantityUnit::Kilogram,
            _ => QuantityUnit::Unit,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QuantityUnit::Gram => "gram",
            QuantityUnit::Milligram => "mg",
            QuantityUnit::Kilogram => "kg",
            QuantityUnit::Unit => "unit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: QuantityUnit,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit.as_str())
    }
}

impl FromStr for Quantity {
    type Err = QuantityParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_quantity(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Currency {
    #[serde(rename = "BTC")]
    Btc,
    #[serde(rename = "USD")]
    Usd,
    #[serde(rename = "EUR")]
    Eur,
}

impl Currency {
    pub fn code(self) -> &'static str {
        match self {
            Currency::Btc => "BTC",
            Currency::Usd => "USD",
            Currency::Eur => "EUR",
        }
    }

    fn from_code(code: &str) -> Option<Currency> {
        match code.to_ascii_uppercase().as_str() {
            "BTC" => Some(Currency::Btc),
            "USD" => Some(Currency::Usd),
            "EUR" => Some(Currency::Eur),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Price {
    pub amount: f64,
    pub currency: Currency,
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.currency.code(), self.amount)
    }
}

impl FromStr for Price {
    type Err = PriceParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_price(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse quantity `{input}`: {reason}")]
pub struct QuantityParseError {
    pub input: String,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse price `{input}`: {reason}")]
pub struct PriceParseError {
    pub input: String,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("listing has no product name")]
pub struct ListingParseError;

/// Splits a leading `digits[.digits]` off `s`.
fn leading_number(s: &str) -> Option<(f64, &str)> {
    let bytes = s.as_bytes();
    let int_end = bytes
        .iter()
        .position(|b| !b.is_ascii_digit())
        .unwrap_or(bytes.len());
    if int_end == 0 {
        return None;
    }
    let mut end = int_end;
    if bytes.get(end) == Some(&b'.') {
        let frac = bytes[end + 1..]
            .iter()
            .position(|b| !b.is_ascii_digit())
            .unwrap_or(bytes.len() - end - 1);
        if frac > 0 {
            end += 1 + frac;
        }
    }
    let value: f64 = s[..end].parse().ok()?;
    value.is_finite().then_some((value, &s[end..]))
}

fn leading_letters(s: &str) -> (&str, &str) {
    let end = s
        .char_indices()
        .find(|(_, c)| !c.is_alphabetic())
        .map_or(s.len(), |(i, _)| i);
    s.split_at(end)
}

/// Parses `"<number> <unit word>"`, e.g. `"1.5 Gr"`. Text after the unit
/// word is ignored.
pub fn parse_quantity(raw: &str) -> std::result::Result<Quantity, QuantityParseError> {
    let err = |reason| QuantityParseError {
        input: raw.to_owned(),
        reason,
    };
    let s = raw.trim();
    if s.is_empty() {
        return Err(err("empty input"));
    }
    let (value, rest) = leading_number(s).ok_or_else(|| err("no leading number"))?;
    let (word, _) = leading_letters(rest.trim_start());
    Ok(Quantity {
        value,
        unit: QuantityUnit::from_word(word),
    })
}

/// Parses `code? number code?` with the code on either side, e.g.
/// `"BTC 0.0444"`, `"0 USD"` or `"btc0.5"`.
pub fn parse_price(raw: &str) -> std::result::Result<Price, PriceParseError> {
    let err = |reason| PriceParseError {
        input: raw.to_owned(),
        reason,
    };
    let s = raw.trim();
    let (prefix, rest) = leading_letters(s);
    let (amount, rest) = leading_number(rest.trim_start()).ok_or_else(|| err("missing number"))?;
    let (suffix, rest) = leading_letters(rest.trim_start());
    if !rest.trim().is_empty() {
        return Err(err("unexpected trailing text"));
    }
    let code = |c: &str| Currency::from_code(c).ok_or_else(|| err("unknown currency code"));
    let currency = match (prefix.is_empty(), suffix.is_empty()) {
        (true, true) => return Err(err("missing currency code")),
        (false, true) => code(prefix)?,
        (true, false) => code(suffix)?,
        (false, false) => {
            let (a, b) = (code(prefix)?, code(suffix)?);
            if a != b {
                return Err(err("conflicting currency codes"));
            }
            a
        }
    };
    Ok(Price { amount, currency })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Listing {
    pub product_name: String,
    pub substance: Option<String>,
    pub drug_class: Option<String>,
    pub dosage: Option<Quantity>,
    pub quantity: Option<Quantity>,
    pub vendor: Option<String>,
    pub price: Option<Price>,
    pub ships_to: Option<String>,
    pub ships_from: Option<String>,
}

impl Listing {
    pub fn named(product_name: impl Into<String>) -> Self {
        Listing {
            product_name: product_name.into(),
            substance: None,
            drug_class: None,
            dosage: None,
            quantity: None,
            vendor: None,
            price: None,
            ships_to: None,
            ships_from: None,
        }
    }
}

/// A listing plus the non-fatal problems met while parsing it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsedListing {
    #[serde(flatten)]
    pub listing: Listing,
    pub warnings: Vec<String>,
}

/// Builds a [`Listing`] from a raw record. Keys: `name` (required),
/// `substance`, `class`, `dosage`, `quantity`, `vendor`, `price`, `ships_to`,
/// `ships_from`.
///
/// The substance comes from the `substance` key when present, otherwise from
/// the first entity recognized in the product name. The drug class always
/// comes from the ontology.
pub fn parse_listing(
    record: &BTreeMap<String, String>,
    ontology: &Ontology,
) -> std::result::Result<ParsedListing, ListingParseError> {
    let field = |key: &str| {
        record
            .get(key)
            .map(|v| v.trim())
            .filter(|v| !v.is_empty())
            .map(str::to_owned)
    };
    let name = field("name").ok_or(ListingParseError)?;
    let mut warnings = Vec::new();
    let mut listing = Listing::named(&name);

    match field("substance") {
        Some(s) => match ontology.resolve(&s) {
            Some(r) => {
                listing.substance = Some(r.canonical.to_owned());
                listing.drug_class = Some(r.drug_class.to_owned());
            }
            None => warnings.push(format!("substance: `{s}` is not in the ontology")),
        },
        None => {
            if let Some(m) = recognize(&name, ontology).first() {
                let r = ontology
                    .lookup_normalized(&m.alias_matched)
                    .expect("recognized alias resolves");
                listing.substance = Some(r.canonical.to_owned());
                listing.drug_class = Some(r.drug_class.to_owned());
            }
        }
    }
    if let Some(class) = field("class") {
        let agrees = listing
            .drug_class
            .as_deref()
            .is_some_and(|c| c.eq_ignore_ascii_case(&class));
        if !agrees {
            warnings.push(format!(
                "class: `{class}` ignored; class is taken from the ontology"
            ));
        }
    }

    for (key, slot) in [
        ("dosage", &mut listing.dosage),
        ("quantity", &mut listing.quantity),
    ] {
        if let Some(raw) = field(key) {
            match parse_quantity(&raw) {
                Ok(q) => *slot = Some(q),
                Err(e) => warnings.push(format!("{key}: {e}")),
            }
        }
    }
    if let Some(raw) = field("price") {
        match parse_price(&raw) {
            Ok(p) => listing.price = Some(p),
            Err(e) => warnings.push(format!("price: {e}")),
        }
    }
    listing.vendor = field("vendor");
    listing.ships_to = field("ships_to");
    listing.ships_from = field("ships_from");

    Ok(ParsedListing { listing, warnings })
}

/// Reads listing records from JSONL. Scalar values are stringified; nested
/// values are rejected. Returns `(line number, record)` pairs.
pub fn read_listing_records<R: BufRead>(
    reader: R,
    source_name: &str,
) -> Result<Vec<(usize, BTreeMap<String, String>)>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(source_name, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line)
            .map_err(|e| Error::parse(source_name, line_no, None, format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::parse(source_name, line_no, None, "expected a JSON object"))?;
        let mut record = BTreeMap::new();
        for (k, v) in obj {
            let s = match v {
                Value::Null => continue,
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                Value::Bool(b) => b.to_string(),
                _ => {
                    return Err(Error::parse(
                        source_name,
                        line_no,
                        Some(k),
                        "expected a scalar value",
                    ))
                }
            };
            record.insert(k.clone(), s);
        }
        out.push((line_no, record));
    }
    Ok(out)
}
