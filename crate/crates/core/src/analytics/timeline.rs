use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::incremental::AnalysisSnapshot;
use crate::registry::{EntityId, GroupKey, Registry, RegistryError};

use super::{AnalyticsError, Subject};

/// Bin count used once a document has more sentences than this.
pub const AGGREGATE_BINS: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TimelineMode {
    Characters,
    /// One row per category of the named dimension.
    Identity(String),
    Groups(Vec<GroupKey>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortOrder {
    Asc,
    #[default]
    Desc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    #[default]
    Auto,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tile {
    pub bin: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimelineRow {
    pub subject: Subject,
    pub label: String,
    pub total_mentions: usize,
    /// Non-empty bins only, ascending.
    pub tiles: Vec<Tile>,
    /// 1-based position under the requested order.
    pub sort_rank: usize,
}

/// Sentences covered by one bin, inclusive and 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinRange {
    pub bin: usize,
    pub first_sentence: usize,
    pub last_sentence: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timeline {
    pub sentence_count: usize,
    pub bin_count: usize,
    pub bins: Vec<BinRange>,
    pub rows: Vec<TimelineRow>,
}

/// Number of bins for `sentences` sentences.
pub fn bin_count(sentences: usize, aggregate: Aggregate) -> usize {
    if aggregate == Aggregate::Auto && sentences > AGGREGATE_BINS {
        AGGREGATE_BINS
    } else {
        sentences
    }
}

/// Zero-based bin of 1-based sentence `s` out of `sentences`, with `bins`
/// bins: `floor((s - 1) * bins / sentences)`.
pub fn bin_index(s: usize, sentences: usize, bins: usize) -> usize {
    debug_assert!(s >= 1 && s <= sentences);
    ((s - 1) as u128 * bins as u128 / sentences as u128) as usize
}

/// Per-sentence mention counts for each row subject, binned and sorted.
pub fn timeline(
    snapshot: &AnalysisSnapshot,
    registry: &Registry,
    mode: &TimelineMode,
    order: SortOrder,
    aggregate: Aggregate,
) -> Result<Timeline, AnalyticsError> {
    let subjects: Vec<(Subject, Vec<EntityId>)> = match mode {
        TimelineMode::Characters => snapshot
            .entity_mentions
            .keys()
            .filter(|id| registry.get(**id).is_some_and(|r| r.is_live()))
            .map(|&id| (Subject::Entity(id), vec![id]))
            .collect(),
        TimelineMode::Identity(dimension) => {
            let dim = registry
                .schema
                .dimension(dimension)
                .ok_or_else(|| RegistryError::UnknownDimension(dimension.clone()))?;
            dim.categories
                .iter()
                .map(|c| {
                    let key = GroupKey::single(dimension, c);
                    let members = registry.group_members(&key)?;
                    Ok((Subject::Group(key), members))
                })
                .collect::<Result<_, RegistryError>>()?
        }
        TimelineMode::Groups(keys) => keys
            .iter()
            .map(|k| Ok((Subject::Group(k.clone()), registry.group_members(k)?)))
            .collect::<Result<_, RegistryError>>()?,
    };

    let s_total = snapshot.sentence_count;
    let bins = bin_count(s_total, aggregate);
    let mut rows: Vec<TimelineRow> = subjects
        .into_iter()
        .map(|(subject, members)| {
            let mut per_bin: BTreeMap<usize, usize> = BTreeMap::new();
            for id in &members {
                for m in snapshot.entity_mentions.get(id).into_iter().flatten() {
                    *per_bin.entry(bin_index(m.sentence_index, s_total, bins)).or_insert(0) += 1;
                }
            }
            TimelineRow {
                label: subject.label(registry),
                subject,
                total_mentions: per_bin.values().sum(),
                tiles: per_bin.into_iter().map(|(bin, count)| Tile { bin, count }).collect(),
                sort_rank: 0,
            }
        })
        .collect();

    rows.sort_by(|a, b| {
        b.total_mentions
            .cmp(&a.total_mentions)
            .then_with(|| a.label.cmp(&b.label))
            .then_with(|| a.subject.cmp(&b.subject))
    });
    if order == SortOrder::Asc {
        rows.reverse();
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row.sort_rank = i + 1;
    }

    Ok(Timeline {
        sentence_count: s_total,
        bin_count: bins,
        bins: bin_ranges(s_total, bins),
        rows,
    })
}

fn bin_ranges(sentences: usize, bins: usize) -> Vec<BinRange> {
    let mut out: Vec<BinRange> = Vec::with_capacity(bins);
    for s in 1..=sentences {
        let bin = bin_index(s, sentences, bins);
        match out.last_mut() {
            Some(last) if last.bin == bin => last.last_sentence = s,
            _ => out.push(BinRange {
                bin,
                first_sentence: s,
                last_sentence: s,
            }),
        }
    }
    out
}
