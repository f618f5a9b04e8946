//! Parses the bundled cryptomarket listings and prints the structured fields.
//!
//!     cargo run --example parse_listing

use std::fs::File;
use std::io::BufReader;

use opioid_lens::listing::{parse_listing, read_listing_records};
use opioid_lens::Ontology;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixtures/listings.jsonl");
    let records = read_listing_records(BufReader::new(File::open(path)?), path)?;
    let ontology = Ontology::bundled();
    for (line, record) in &records {
        let parsed = parse_listing(record, &ontology)?;
        let l = &parsed.listing;
        println!("line {line}: {}", l.product_name);
        println!(
            "  substance {:?}, class {:?}",
            l.substance.as_deref().unwrap_or("-"),
            l.drug_class.as_deref().unwrap_or("-")
        );
        if let Some(q) = l.quantity {
            println!("  quantity {q}");
        }
        if let Some(p) = l.price {
            println!("  price {p}");
        }
        if let Some(from) = &l.ships_from {
            println!("  ships from {from}");
        }
        for w in &parsed.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
