use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::incremental::AnalysisSnapshot;
use crate::registry::{EntityId, GroupKey, Registry, RegistryError};

use super::{AnalyticsError, Subject};

/// Edges with fewer shared sentences are hidden unless asked for.
pub const DEFAULT_MIN_EDGE_COUNT: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionEdge {
    pub a: Subject,
    pub b: Subject,
    /// Sentences in which both are mentioned.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpactNode {
    pub subject: Subject,
    pub label: String,
    pub total_mentions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpactGraph {
    pub focus: Subject,
    pub min_count: usize,
    pub nodes: Vec<ImpactNode>,
    pub edges: Vec<InteractionEdge>,
}

/// Sentence co-mention counts between units, keyed by `(i, j)` with
/// `i < j` indexing `units`. Two units co-occur in a sentence when distinct
/// member characters of each are both mentioned there.
pub fn co_mention_counts(
    snapshot: &AnalysisSnapshot,
    units: &[Vec<EntityId>],
) -> BTreeMap<(usize, usize), usize> {
    let mut unit_of: HashMap<EntityId, Vec<usize>> = HashMap::new();
    for (u, members) in units.iter().enumerate() {
        for id in members {
            unit_of.entry(*id).or_default().push(u);
        }
    }
    // sentence -> unit -> distinct members mentioned
    let mut per_sentence: BTreeMap<usize, BTreeMap<usize, BTreeSet<EntityId>>> = BTreeMap::new();
    for (id, mentions) in &snapshot.entity_mentions {
        let Some(owning) = unit_of.get(id) else { continue };
        for m in mentions {
            let slot = per_sentence.entry(m.sentence_index).or_default();
            for &u in owning {
                slot.entry(u).or_default().insert(*id);
            }
        }
    }
    let mut counts = BTreeMap::new();
    for present in per_sentence.values() {
        let present: Vec<(&usize, &BTreeSet<EntityId>)> = present.iter().collect();
        for (x, (ui, mi)) in present.iter().enumerate() {
            for (uj, mj) in &present[x + 1..] {
                let distinct = mi.iter().any(|a| mj.iter().any(|b| a != b));
                if distinct {
                    *counts.entry((**ui, **uj)).or_insert(0) += 1;
                }
            }
        }
    }
    counts
}

/// Edges incident to `focus` with at least `min_count` shared sentences,
/// plus edges among those neighbours meeting the same threshold.
///
/// For a character focus the other nodes are all live characters. For a
/// group focus they are every combination of categories over the focus's
/// dimensions.
pub fn impact_graph(
    snapshot: &AnalysisSnapshot,
    registry: &Registry,
    focus: &Subject,
    min_count: usize,
) -> Result<ImpactGraph, AnalyticsError> {
    if min_count == 0 {
        return Err(AnalyticsError::InvalidArgument("min_count must be at least 1".into()));
    }
    focus.members(registry)?;
    let universe: Vec<Subject> = match focus {
        Subject::Entity(_) => registry.live().map(|r| Subject::Entity(r.id)).collect(),
        Subject::Group(key) => group_universe(registry, key)?.into_iter().map(Subject::Group).collect(),
    };
    let members: Vec<Vec<EntityId>> = universe
        .iter()
        .map(|s| s.members(registry))
        .collect::<Result<_, _>>()?;
    let focus_idx = universe
        .iter()
        .position(|s| s == focus)
        .expect("focus is part of its universe");
    let counts = co_mention_counts(snapshot, &members);
    let count = |i: usize, j: usize| counts.get(&(i.min(j), i.max(j))).copied().unwrap_or(0);

    let neighbours: Vec<usize> = (0..universe.len())
        .filter(|&j| j != focus_idx && count(focus_idx, j) >= min_count)
        .collect();
    let mut edges = Vec::new();
    for &j in &neighbours {
        edges.push((focus_idx, j, count(focus_idx, j)));
    }
    for (x, &i) in neighbours.iter().enumerate() {
        for &j in &neighbours[x + 1..] {
            let c = count(i, j);
            if c >= min_count {
                edges.push((i.min(j), i.max(j), c));
            }
        }
    }

    let total = |i: usize| -> usize {
        members[i]
            .iter()
            .map(|id| snapshot.entity_mentions.get(id).map_or(0, Vec::len))
            .sum()
    };
    let nodes = std::iter::once(focus_idx)
        .chain(neighbours.iter().copied())
        .map(|i| ImpactNode {
            subject: universe[i].clone(),
            label: universe[i].label(registry),
            total_mentions: total(i),
        })
        .collect();
    Ok(ImpactGraph {
        focus: focus.clone(),
        min_count,
        nodes,
        edges: edges
            .into_iter()
            .map(|(i, j, c)| InteractionEdge {
                a: universe[i].clone(),
                b: universe[j].clone(),
                count: c,
            })
            .collect(),
    })
}

fn group_universe(registry: &Registry, focus: &GroupKey) -> Result<Vec<GroupKey>, RegistryError> {
    focus.validate(&registry.schema)?;
    let mut keys: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for dim in focus.selections.keys() {
        let categories = &registry.schema.dimension(dim).expect("validated").categories;
        keys = keys
            .into_iter()
            .flat_map(|prefix| {
                categories.iter().map(move |c| {
                    let mut next = prefix.clone();
                    next.push((dim.clone(), c.clone()));
                    next
                })
            })
            .collect();
    }
    keys.into_iter().map(GroupKey::new).collect()
}
