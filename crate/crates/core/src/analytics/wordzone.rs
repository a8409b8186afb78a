use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::incremental::AnalysisSnapshot;
use crate::registry::{EntityId, Registry};
use crate::text::Pos;

use super::{AnalyticsError, Subject};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosFilter {
    Adj,
    Verb,
    #[default]
    Both,
}

impl PosFilter {
    pub fn admits(self, pos: Pos) -> bool {
        match self {
            PosFilter::Adj => pos == Pos::Adj,
            PosFilter::Verb => pos == Pos::Verb,
            PosFilter::Both => matches!(pos, Pos::Adj | Pos::Verb),
        }
    }
}

impl std::str::FromStr for PosFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "ADJ" => Ok(PosFilter::Adj),
            "VERB" => Ok(PosFilter::Verb),
            "BOTH" => Ok(PosFilter::Both),
            _ => Err(format!("unknown part-of-speech filter {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordZoneEntry {
    pub subject: Subject,
    pub word: String,
    pub pos_class: Pos,
    /// `tf / df`: links to the subject over occurrences in the story.
    pub weight: f64,
    pub tf: usize,
    pub df: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordZone {
    pub subject: Subject,
    pub label: String,
    /// Highest weight first, ties alphabetical; at most `k`.
    pub entries: Vec<WordZoneEntry>,
}

/// Top-`k` weighted descriptors and actions per subject.
///
/// `tf` counts the subject's attribute links for a word (summed over group
/// members); `df` counts the word among all tokens of the story. A subject
/// without links gets an empty zone.
pub fn word_zone(
    snapshot: &AnalysisSnapshot,
    registry: &Registry,
    subjects: &[Subject],
    filter: PosFilter,
    k: usize,
) -> Result<Vec<WordZone>, AnalyticsError> {
    if k == 0 {
        return Err(AnalyticsError::InvalidArgument("k must be at least 1".into()));
    }
    if subjects.is_empty() {
        return Err(AnalyticsError::InvalidArgument("no subjects given".into()));
    }
    subjects
        .iter()
        .map(|subject| {
            let members: HashSet<EntityId> = subject.members(registry)?.into_iter().collect();
            let mut tf: BTreeMap<(String, Pos), usize> = BTreeMap::new();
            for link in &snapshot.attribute_links {
                if members.contains(&link.entity) && filter.admits(link.pos_class) {
                    *tf.entry((link.word.clone(), link.pos_class)).or_insert(0) += 1;
                }
            }
            let mut entries: Vec<WordZoneEntry> = tf
                .into_iter()
                .map(|((word, pos_class), tf)| {
                    let df = snapshot.word_frequencies.get(&word).copied().unwrap_or(0).max(1);
                    WordZoneEntry {
                        subject: subject.clone(),
                        weight: tf as f64 / df as f64,
                        word,
                        pos_class,
                        tf,
                        df,
                    }
                })
                .collect();
            entries.sort_by(|a, b| {
                b.weight
                    .total_cmp(&a.weight)
                    .then_with(|| a.word.cmp(&b.word))
                    .then_with(|| a.pos_class.cmp(&b.pos_class))
            });
            entries.truncate(k);
            Ok(WordZone {
                subject: subject.clone(),
                label: subject.label(registry),
                entries,
            })
        })
        .collect()
}
