mod support;

use std::collections::BTreeSet;

use storyscope::incremental::Orchestrator;
use storyscope::registry::Registry;
use storyscope::text::split_paragraphs;
use support::*;

#[test]
fn random_edits_match_cold_analysis_on_every_fixture() {
    for (k, name) in FIXTURES.iter().enumerate() {
        incremental_fuzz(&story(name), 40, 1000 + k as u64).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn new_alias_evicts_exactly_the_paragraphs_containing_it() {
    let paragraphs = [
        "Peter Parker left the lab.",
        "The spidey sense tingled twice.",
        "Mary waited by the window.",
        "He said the spidey suit was torn.",
        "Spideys are not real, said Mary.",
    ];
    let document = paragraphs.join("\n\n");
    let mut registry = Registry::default();
    let mut orchestrator = Orchestrator::default();
    orchestrator.analyze(&document, None, &mut registry);
    let split = split_paragraphs(&document);
    let cached: BTreeSet<usize> = split
        .iter()
        .filter(|(p, _)| orchestrator.cache().contains(p.content_hash))
        .map(|(p, _)| p.index)
        .collect();
    assert_eq!(cached.len(), paragraphs.len());

    let peter = id_named(&registry, "Peter Parker");
    registry.add_alias(peter, "spidey").unwrap();
    let by_index: BTreeSet<usize> = orchestrator
        .cache()
        .entries_containing("spidey")
        .into_iter()
        .filter_map(|h| split.iter().find(|(p, _)| p.content_hash == h).map(|(p, _)| p.index))
        .collect();
    // full scan: every paragraph whose words include the alias token
    let scan: BTreeSet<usize> = split
        .iter()
        .filter(|(_, text)| word_occurrences(text, "spidey") > 0)
        .map(|(p, _)| p.index)
        .collect();
    assert_eq!(by_index, scan);
    assert_eq!(scan, BTreeSet::from([1, 3]));

    let evicted = orchestrator.invalidate_on_registry_change(&registry);
    assert_eq!(evicted, 2);
    let outcome = orchestrator.analyze(&document, None, &mut registry);
    assert_eq!(outcome.pipeline_runs, 2);
    assert_eq!(outcome.snapshot.entity_mentions[&peter].len(), 3);
    let (cold_snapshot, _) = cold(&document, &registry);
    assert_eq!(*outcome.snapshot, cold_snapshot);
}

#[test]
fn age_change_keeps_the_cache_and_matches_cold() {
    let document = story("kiss_of_ice");
    let mut registry = Registry::default();
    let mut orchestrator = Orchestrator::default();
    orchestrator.analyze(&document, None, &mut registry);
    let marta = id_named(&registry, "Marta");
    registry.assign(marta, "Age group", Some("Child")).unwrap();
    assert_eq!(orchestrator.invalidate_on_registry_change(&registry), 0);
    let outcome = orchestrator.analyze(&document, None, &mut registry);
    assert_eq!(outcome.pipeline_runs, 0);
    assert_eq!(*outcome.snapshot, cold(&document, &registry).0);
}

#[test]
fn identical_paragraphs_share_one_cache_entry() {
    let document = "Anna smiled.\n\nAnna smiled.\n\nAnna smiled.";
    let mut registry = Registry::default();
    let mut orchestrator = Orchestrator::default();
    let outcome = orchestrator.analyze(document, None, &mut registry);
    assert_eq!(orchestrator.cache().len(), 1);
    assert_eq!(outcome.pipeline_runs, 1);
    assert_eq!(outcome.snapshot.resolved_mention_count(), 3);
}

#[test]
fn old_snapshots_are_never_mutated() {
    let mut document = story("anna_excerpt");
    let mut registry = Registry::default();
    let mut orchestrator = Orchestrator::default();
    let first = orchestrator.analyze(&document, None, &mut registry).snapshot;
    let frozen = (*first).clone();
    document.push_str("\n\nKitty laughed.");
    let second = orchestrator.analyze(&document, None, &mut registry).snapshot;
    assert!(second.snapshot_version > first.snapshot_version);
    assert_eq!(*first, frozen);
    assert_eq!(first.snapshot_version, frozen.snapshot_version);
}
