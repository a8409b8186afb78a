//! Prints a presence timeline, aggregated to 500 bins on long documents,
//! and an identity-dimension view after tagging characters.
//!
//! cargo run -p storyscope-core --example timeline -- crates/core/fixtures/anna_excerpt.txt

use storyscope::analytics::{timeline, Aggregate, SortOrder, TimelineMode};
use storyscope::incremental::Orchestrator;
use storyscope::registry::Registry;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "crates/core/fixtures/anna_excerpt.txt".into());
    let document = std::fs::read_to_string(path)?;
    let mut registry = Registry::default();
    let snapshot = Orchestrator::default().analyze(&document, None, &mut registry).snapshot;

    let t = timeline(&snapshot, &registry, &TimelineMode::Characters, SortOrder::Desc, Aggregate::Auto)?;
    println!("{} sentences in {} bins", t.sentence_count, t.bin_count);
    for row in &t.rows {
        let mut strip = vec!['.'; t.bin_count.min(80)];
        for tile in &row.tiles {
            let width = strip.len();
            strip[tile.bin * width / t.bin_count] = '#';
        }
        println!("{:>12} {:>4} {}", row.label, row.total_mentions, strip.iter().collect::<String>());
    }

    registry.extend_schema("Role", Some("Lead"))?;
    registry.extend_schema("Role", Some("Support"))?;
    let ids: Vec<_> = registry.live().map(|r| (r.id, r.canonical_name.clone())).collect();
    for (id, name) in ids {
        let role = if name.starts_with('A') || name.starts_with('V') { "Lead" } else { "Support" };
        registry.assign(id, "Role", Some(role))?;
    }
    let by_role = timeline(&snapshot, &registry, &TimelineMode::Identity("Role".into()), SortOrder::Desc, Aggregate::Auto)?;
    for row in &by_role.rows {
        println!("{:>12} {:>4}", row.label, row.total_mentions);
    }
    Ok(())
}
