//! Ranks character pairs by how far apart their vocabularies sit in an
//! embedding space. Takes a word2vec-style text table.
//!
//! cargo run -p storyscope-core --example candidate_pairs -- crates/core/fixtures/anna_excerpt.txt crates/core/fixtures/toy_embeddings.txt

use std::path::Path;

use storyscope::analytics::{candidate_pairs, EmbeddingTable, Subject, DEFAULT_TOP_N_PAIRS, MIN_EMBEDDED_WORDS};
use storyscope::incremental::Orchestrator;
use storyscope::registry::Registry;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "crates/core/fixtures/anna_excerpt.txt".into());
    let table_path = args.next().unwrap_or_else(|| "crates/core/fixtures/toy_embeddings.txt".into());

    let table = EmbeddingTable::load(Path::new(&table_path))?;
    let document = std::fs::read_to_string(path)?;
    let mut registry = Registry::default();
    let snapshot = Orchestrator::default().analyze(&document, None, &mut registry).snapshot;
    let subjects: Vec<Subject> = registry.live().map(|r| Subject::Entity(r.id)).collect();

    let pairs = candidate_pairs(&snapshot, &registry, &table, &subjects, DEFAULT_TOP_N_PAIRS, MIN_EMBEDDED_WORDS)?;
    for p in pairs {
        println!("{:.4}  {} / {}", p.distance, p.a_label, p.b_label);
    }
    Ok(())
}
