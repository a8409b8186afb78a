//! Edits one paragraph of a story and shows that only that paragraph is
//! re-run, while registry edits (a merge) invalidate just what they touch.
//!
//! cargo run -p storyscope-core --example incremental_edit

use storyscope::incremental::Orchestrator;
use storyscope::registry::Registry;
use storyscope::text::DeltaOp;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "crates/core/fixtures/sleeping_beauty.txt".into());
    let mut document = std::fs::read_to_string(path)?;
    let mut registry = Registry::default();
    let mut orchestrator = Orchestrator::default();

    let first = orchestrator.analyze(&document, None, &mut registry);
    println!("cold: {} paragraphs ran, {} characters", first.pipeline_runs, registry.live().count());

    let insert = "Aurora laughed at the gate. ";
    document.insert_str(0, insert);
    let delta = [DeltaOp::Insert(insert.into())];
    let edit = orchestrator.analyze(&document, Some(&delta), &mut registry);
    println!(
        "edit: {} paragraph ran, changed {:?}, hint {:?}",
        edit.pipeline_runs, edit.changed_paragraphs, edit.delta_hint
    );

    let live: Vec<_> = registry.live().map(|r| r.id).collect();
    if let [target, source, ..] = live[..] {
        registry.merge(target, source)?;
        let after = orchestrator.analyze(&document, None, &mut registry);
        println!(
            "merge: {} paragraphs re-ran, snapshot version {}",
            after.pipeline_runs, after.snapshot.snapshot_version
        );
    }
    Ok(())
}
