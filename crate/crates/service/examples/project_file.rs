//! Saves a project file, loads it back and builds a batch report from it.
//!
//! cargo run -p storyscope-service --example project_file -- crates/core/fixtures/kiss_of_ice.txt

use storyscope::incremental::Orchestrator;
use storyscope_service::project::Project;
use storyscope_service::report::Report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "crates/core/fixtures/kiss_of_ice.txt".into());
    let document = std::fs::read_to_string(&path)?;
    let mut project = Project::new("example", &path, document);
    let snapshot = Orchestrator::default().analyze(&project.document, None, &mut project.registry).snapshot;

    let dir = tempfile::tempdir()?;
    let file = dir.path().join("example.json");
    project.save(&file)?;
    let loaded = Project::load(&file)?;
    println!("{} bytes on disk, equal after load: {}", std::fs::metadata(&file)?.len(), loaded == project);

    let report = Report::build(&snapshot, &loaded.registry, &loaded.settings, None)?;
    for row in &report.timeline.rows {
        println!("{:>12} {:>4} mentions", row.label, row.total_mentions);
    }
    Ok(())
}
