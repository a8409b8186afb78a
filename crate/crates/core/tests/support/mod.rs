//! Fixtures, brute-force oracles and random edit scripts shared by the
//! integration tests. Oracles work from raw text or the flat mention list
//! so they do not reuse the code paths they check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use storyscope::entities::EntityRef;
use storyscope::incremental::{AnalysisSnapshot, Orchestrator};
use storyscope::registry::{EntityId, Registry};
use storyscope::text::{DeltaOp, Pos};

pub const FIXTURES: [&str; 3] = ["sleeping_beauty", "anna_excerpt", "kiss_of_ice"];

pub fn fixture_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(file)
}

pub fn fixture(file: &str) -> String {
    std::fs::read_to_string(fixture_path(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

pub fn story(name: &str) -> String {
    fixture(&format!("{name}.txt"))
}

/// Fresh orchestrator over a copy of `registry`.
pub fn cold(document: &str, registry: &Registry) -> (AnalysisSnapshot, Registry) {
    let mut registry = registry.clone();
    let outcome = Orchestrator::default().analyze(document, None, &mut registry);
    ((*outcome.snapshot).clone(), registry)
}

pub fn analyzed(document: &str) -> (AnalysisSnapshot, Registry) {
    cold(document, &Registry::default())
}

pub fn id_named(registry: &Registry, name: &str) -> EntityId {
    registry
        .live()
        .find(|r| r.canonical_name == name)
        .unwrap_or_else(|| panic!("no live character {name}"))
        .id
}

/// Mentioned sentences per live character, from the flat mention list.
pub fn mention_sentences(snapshot: &AnalysisSnapshot, registry: &Registry) -> BTreeMap<EntityId, Vec<usize>> {
    let mut out: BTreeMap<EntityId, Vec<usize>> = BTreeMap::new();
    for m in &snapshot.mentions {
        if let EntityRef::Entity(id) = m.entity {
            if registry.get(id).is_some_and(|r| r.is_live()) {
                out.entry(id).or_default().push(m.sentence_index);
            }
        }
    }
    out
}

/// Per-sentence mention counts of a set of characters, indexed 1..=S.
pub fn per_sentence_counts(
    snapshot: &AnalysisSnapshot,
    registry: &Registry,
    members: &[EntityId],
) -> Vec<usize> {
    let mut counts = vec![0; snapshot.sentence_count + 1];
    let sentences = mention_sentences(snapshot, registry);
    for id in members {
        for &s in sentences.get(id).into_iter().flatten() {
            counts[s] += 1;
        }
    }
    counts
}

/// Sentences in which distinct members of `a` and `b` are both mentioned,
/// by scanning every sentence and every member pair.
pub fn co_mentions(
    snapshot: &AnalysisSnapshot,
    registry: &Registry,
    a: &[EntityId],
    b: &[EntityId],
) -> usize {
    let sentences = mention_sentences(snapshot, registry);
    let in_sentence = |id: &EntityId, s: usize| sentences.get(id).is_some_and(|v| v.contains(&s));
    (1..=snapshot.sentence_count)
        .filter(|&s| {
            a.iter()
                .any(|x| b.iter().any(|y| x != y && in_sentence(x, s) && in_sentence(y, s)))
        })
        .count()
}

/// Case-folded whole-word occurrences of `word` in `text`, by direct scan.
/// Hyphens and apostrophes join words except before a contraction ending.
pub fn word_occurrences(text: &str, word: &str) -> u64 {
    let chars: Vec<char> = text.to_lowercase().chars().collect();
    let target: Vec<char> = word.chars().collect();
    let n = target.len();
    let joins = |i: usize, forward: bool| -> bool {
        let Some(&c) = chars.get(i) else { return false };
        if c.is_alphanumeric() {
            return true;
        }
        if !matches!(c, '-' | '\'' | '’') {
            return false;
        }
        if forward {
            let rest: String = chars[i + 1..chars.len().min(i + 4)].iter().collect();
            let clitic = ["s", "d", "ll", "re", "ve", "m"]
                .iter()
                .any(|c| rest.starts_with(c) && !rest[c.len()..].starts_with(char::is_alphanumeric));
            !clitic && chars.get(i + 1).is_some_and(|c| c.is_alphanumeric())
        } else {
            i > 0 && chars[i - 1].is_alphanumeric()
        }
    };
    (0..chars.len().saturating_sub(n - 1))
        .filter(|&i| chars[i..i + n] == target[..])
        .filter(|&i| !(i > 0 && joins(i - 1, false)) && !joins(i + n, true))
        .count() as u64
}

/// tf/df weights of `(word, pos)` for a set of characters, from scratch.
pub fn eq1_weights(
    document: &str,
    snapshot: &AnalysisSnapshot,
    members: &[EntityId],
    admit: impl Fn(Pos) -> bool,
) -> BTreeMap<(String, Pos), f64> {
    let mut tf: BTreeMap<(String, Pos), usize> = BTreeMap::new();
    for link in &snapshot.attribute_links {
        if members.contains(&link.entity) && admit(link.pos_class) {
            *tf.entry((link.word.clone(), link.pos_class)).or_default() += 1;
        }
    }
    tf.into_iter()
        .map(|(key, tf)| {
            let df = word_occurrences(document, &key.0);
            assert!(df >= 1, "linked word {:?} not found in the text", key.0);
            (key, tf as f64 / df as f64)
        })
        .collect()
}

pub fn cosine_distance(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    1.0 - dot / (na * nb)
}

/// One random document edit, returned as the new text plus a delta that
/// transforms the old text into it.
pub fn random_edit(rng: &mut StdRng, document: &str, pool: &[&str]) -> (String, Vec<DeltaOp>) {
    let chars: Vec<char> = document.chars().collect();
    let paragraph_starts: Vec<usize> = std::iter::once(0)
        .chain((1..chars.len()).filter(|&i| chars[i - 1] == '\n' && chars[i] != '\n'))
        .collect();
    let pick_start = |rng: &mut StdRng| *paragraph_starts.choose(rng).unwrap_or(&0);
    let sentence = |rng: &mut StdRng| -> String { pool.choose(rng).copied().unwrap_or("Nobody came.").to_string() };

    let (at, delete, insert): (usize, usize, String) = match rng.gen_range(0..8) {
        // new paragraph
        0 => (pick_start(rng), 0, format!("{}\n\n", sentence(rng))),
        // sentence appended at the end of the document
        1 => (chars.len(), 0, format!("\n\n{}", sentence(rng))),
        // sentence typed into a paragraph
        2 => (pick_start(rng), 0, format!("{} ", sentence(rng))),
        // delete a random run
        3 if !chars.is_empty() => {
            let start = rng.gen_range(0..chars.len());
            let len = rng.gen_range(1..=(chars.len() - start).min(120));
            (start, len, String::new())
        }
        // split a paragraph
        4 if !chars.is_empty() => (rng.gen_range(0..chars.len()), 0, "\n\n".into()),
        // join two paragraphs
        5 => {
            let breaks: Vec<usize> = (1..chars.len())
                .filter(|&i| chars[i - 1] != '\n' && chars[i] == '\n' && chars.get(i + 1) == Some(&'\n'))
                .collect();
            match breaks.choose(rng) {
                Some(&b) => (b, 2, " ".into()),
                None => (0, 0, sentence(rng)),
            }
        }
        // single character typo
        6 if !chars.is_empty() => {
            let start = rng.gen_range(0..chars.len());
            let c = *['a', 'e', ' ', '.', 'K', '\n'].choose(rng).unwrap();
            (start, 1, c.to_string())
        }
        // paste a copy of an existing paragraph
        _ => {
            let start = pick_start(rng);
            let end = (start..chars.len()).find(|&i| chars[i] == '\n').unwrap_or(chars.len());
            let copy: String = chars[start..end].iter().collect();
            (chars.len(), 0, format!("\n\n{copy}"))
        }
    };
    let mut delta = Vec::new();
    if at > 0 {
        delta.push(DeltaOp::Retain(at));
    }
    if delete > 0 {
        delta.push(DeltaOp::Delete(delete));
    }
    if !insert.is_empty() {
        delta.push(DeltaOp::Insert(insert.clone()));
    }
    let mut next: String = chars[..at].iter().collect();
    next.push_str(&insert);
    next.extend(&chars[at + delete..]);
    (next, delta)
}

/// Applies one random registry operation. Returns a short description.
pub fn random_registry_op(rng: &mut StdRng, document: &str, registry: &mut Registry) -> String {
    let live: Vec<EntityId> = registry.live().map(|r| r.id).collect();
    let dead: Vec<EntityId> = registry
        .records()
        .filter(|r| !r.is_live() && r.merged_into.is_none())
        .map(|r| r.id)
        .collect();
    let words: Vec<&str> = document
        .split(|c: char| !c.is_alphabetic())
        .filter(|w| w.len() > 3)
        .collect();
    match rng.gen_range(0..6) {
        0 if live.len() >= 2 => {
            let pair: Vec<&EntityId> = live.choose_multiple(rng, 2).collect();
            let _ = registry.merge(*pair[0], *pair[1]);
            format!("merge {} <- {}", pair[0], pair[1])
        }
        1 if !live.is_empty() => {
            let id = *live.choose(rng).unwrap();
            let _ = registry.delete(id);
            format!("delete {id}")
        }
        2 if !dead.is_empty() => {
            let id = *dead.choose(rng).unwrap();
            let _ = registry.restore(id);
            format!("restore {id}")
        }
        3 if !live.is_empty() && !words.is_empty() => {
            let id = *live.choose(rng).unwrap();
            let word = words.choose(rng).unwrap().to_lowercase();
            let _ = registry.add_alias(id, &word);
            format!("alias {id} {word}")
        }
        4 if !live.is_empty() => {
            let id = *live.choose(rng).unwrap();
            let cat = ["Female", "Male", "Non-binary"].choose(rng).copied();
            let cat = if rng.gen_bool(0.2) { None } else { cat };
            let _ = registry.assign(id, "Gender", cat);
            format!("gender {id} {cat:?}")
        }
        _ if !live.is_empty() => {
            let id = *live.choose(rng).unwrap();
            let _ = registry.assign(id, "Age group", Some("Adult"));
            format!("age {id}")
        }
        _ => "noop".into(),
    }
}

/// Sentences used to grow fixtures during fuzzing.
pub const EDIT_POOL: [&str; 12] = [
    "Florimond was brave.",
    "Aurora laughed at him.",
    "She was clever and quick.",
    "Kitty and Levin walked home together.",
    "He smiled at Dolly.",
    "Marta skated past Tomas and Elsabeth.",
    "Then Hope sang softly.",
    "The spidey sense tingled.",
    "Mrs. Brown was tired.",
    "Nobody answered the door.",
    "Vronsky was proud, and Anna was charming.",
    "Carabosse hissed at the Lilac Fairy.",
];

pub fn distinct_sorted<T: Ord + Clone>(items: &[T]) -> Vec<T> {
    items.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Runs `steps` random edits and registry operations against one
/// orchestrator, comparing each incremental snapshot and registry with a
/// cold analysis. Returns the first mismatch.
pub fn incremental_fuzz(document: &str, steps: usize, seed: u64) -> Result<(), String> {
    use rand::SeedableRng;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut registry = Registry::default();
    let mut orchestrator = Orchestrator::default();
    let mut current = document.to_string();
    orchestrator.analyze(&current, None, &mut registry);
    for step in 0..steps {
        let (action, pre) = if rng.gen_bool(0.7) {
            let (next, delta) = random_edit(&mut rng, &current, &EDIT_POOL);
            let pre = registry.clone();
            let with_hint = rng.gen_bool(0.5);
            let outcome = orchestrator.analyze(&next, with_hint.then_some(&delta[..]), &mut registry);
            if with_hint && outcome.delta_hint != storyscope::incremental::DeltaHint::Applied {
                return Err(format!("step {step}: valid hint rejected: {:?}", outcome.delta_hint));
            }
            current = next;
            (format!("edit {delta:?}"), pre)
        } else {
            let op = random_registry_op(&mut rng, &current, &mut registry);
            let pre = registry.clone();
            orchestrator.analyze(&current, None, &mut registry);
            (op, pre)
        };
        let incremental = orchestrator.snapshot().expect("analyzed");
        let (cold_snapshot, cold_registry) = cold(&current, &pre);
        if *incremental != cold_snapshot {
            return Err(format!("step {step} ({action}): snapshot differs from cold analysis"));
        }
        if registry != cold_registry {
            return Err(format!("step {step} ({action}): registry differs from cold analysis"));
        }
    }
    Ok(())
}
