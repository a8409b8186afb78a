//! Runs the full pipeline on a text file and prints each character's
//! mention count and linked words.
//!
//! cargo run -p storyscope-core --example analyze_story -- crates/core/fixtures/anna_excerpt.txt

use storyscope::incremental::Orchestrator;
use storyscope::registry::Registry;

fn main() -> std::io::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "crates/core/fixtures/sleeping_beauty.txt".into());
    let document = std::fs::read_to_string(&path)?;
    let mut registry = Registry::default();
    let mut orchestrator = Orchestrator::default();
    let outcome = orchestrator.analyze(&document, None, &mut registry);
    let snapshot = outcome.snapshot;

    println!("{} sentences, {} paragraphs", snapshot.sentence_count, snapshot.paragraphs.len());
    for (id, mentions) in &snapshot.entity_mentions {
        let name = &registry.get(*id).expect("live").canonical_name;
        let words: Vec<String> = snapshot
            .attribute_links
            .iter()
            .filter(|l| l.entity == *id)
            .map(|l| format!("{}/{}", l.word, l.pos_class))
            .collect();
        println!("{name:>12} {:>3} mentions  {}", mentions.len(), words.join(" "));
    }
    Ok(())
}
