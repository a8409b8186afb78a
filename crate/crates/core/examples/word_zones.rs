//! Prints each character's most distinctive descriptors and actions.
//!
//! cargo run -p storyscope-core --example word_zones -- crates/core/fixtures/anna_excerpt.txt 5

use storyscope::analytics::{word_zone, PosFilter, Subject};
use storyscope::incremental::Orchestrator;
use storyscope::registry::Registry;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "crates/core/fixtures/anna_excerpt.txt".into());
    let k = args.next().map_or(Ok(10), |k| k.parse())?;

    let document = std::fs::read_to_string(path)?;
    let mut registry = Registry::default();
    let snapshot = Orchestrator::default().analyze(&document, None, &mut registry).snapshot;
    let subjects: Vec<Subject> = snapshot.entity_mentions.keys().map(|&id| Subject::Entity(id)).collect();
    if subjects.is_empty() {
        return Ok(());
    }
    for zone in word_zone(&snapshot, &registry, &subjects, PosFilter::Both, k)? {
        let words: Vec<String> = zone
            .entries
            .iter()
            .map(|e| format!("{}/{} {:.2}", e.word, e.pos_class, e.weight))
            .collect();
        println!("{:>12}: {}", zone.label, words.join(", "));
    }
    Ok(())
}
