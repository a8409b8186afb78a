//! Prints the co-mention network around one character.
//!
//! cargo run -p storyscope-core --example impact -- crates/core/fixtures/anna_excerpt.txt Anna 2

use storyscope::analytics::{impact_graph, Subject, DEFAULT_MIN_EDGE_COUNT};
use storyscope::incremental::Orchestrator;
use storyscope::registry::Registry;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "crates/core/fixtures/anna_excerpt.txt".into());
    let name = args.next().unwrap_or_else(|| "Anna".into());
    let min = args.next().map_or(Ok(DEFAULT_MIN_EDGE_COUNT), |m| m.parse())?;

    let document = std::fs::read_to_string(path)?;
    let mut registry = Registry::default();
    let snapshot = Orchestrator::default().analyze(&document, None, &mut registry).snapshot;
    let id = registry.lookup(&name).ok_or(format!("no character called {name}"))?;

    let graph = impact_graph(&snapshot, &registry, &Subject::Entity(id), min)?;
    let label = |s: &Subject| s.label(&registry);
    for node in &graph.nodes {
        println!("node {:>12} {:>4} mentions", node.label, node.total_mentions);
    }
    for edge in &graph.edges {
        println!("edge {:>12} -- {:<12} {}", label(&edge.a), label(&edge.b), edge.count);
    }
    Ok(())
}
