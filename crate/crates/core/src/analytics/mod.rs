//! Timelines, impact graphs, word zones and embedding-based candidate
//! pairs, all computed from an [`AnalysisSnapshot`](crate::incremental::AnalysisSnapshot)
//! plus the registry it was built against.

mod candidates;
mod embeddings;
mod impact;
mod timeline;
mod wordzone;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::registry::{EntityId, GroupKey, Registry, RegistryError};

pub use candidates::{candidate_pairs, CandidatePair, MIN_EMBEDDED_WORDS};
pub use embeddings::{EmbeddingError, EmbeddingTable};
pub use impact::{co_mention_counts, impact_graph, ImpactGraph, ImpactNode, InteractionEdge, DEFAULT_MIN_EDGE_COUNT};
pub use timeline::{
    bin_index, bin_count, timeline, Aggregate, BinRange, SortOrder, Tile, Timeline, TimelineMode,
    TimelineRow, AGGREGATE_BINS,
};
pub use wordzone::{word_zone, PosFilter, WordZone, WordZoneEntry};

pub const DEFAULT_TOP_N_PAIRS: usize = 10;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum AnalyticsError {
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error("fewer than two subjects have enough embedded words")]
    NoEligibleSubjects,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A character or an intersectional group of characters.
///
/// On the wire a character is its numeric id and a group is its
/// `Dimension:Category+Dimension:Category` text form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Entity(EntityId),
    Group(GroupKey),
}

impl Subject {
    /// Live member characters. A character subject must itself be live.
    pub fn members(&self, registry: &Registry) -> Result<Vec<EntityId>, RegistryError> {
        match self {
            Subject::Entity(id) => match registry.get(*id) {
                Some(r) if r.is_live() => Ok(vec![*id]),
                _ => Err(RegistryError::UnknownEntity(*id)),
            },
            Subject::Group(key) => registry.group_members(key),
        }
    }

    /// Display label: canonical name or group label.
    pub fn label(&self, registry: &Registry) -> String {
        match self {
            Subject::Entity(id) => registry
                .get(*id)
                .map_or_else(|| id.to_string(), |r| r.canonical_name.clone()),
            Subject::Group(key) => key.label(),
        }
    }
}

impl From<EntityId> for Subject {
    fn from(id: EntityId) -> Self {
        Subject::Entity(id)
    }
}

impl From<GroupKey> for Subject {
    fn from(key: GroupKey) -> Self {
        Subject::Group(key)
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Entity(id) => write!(f, "{id}"),
            Subject::Group(key) => write!(f, "{key}"),
        }
    }
}

impl FromStr for Subject {
    type Err = RegistryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().parse::<u64>() {
            Ok(n) => Ok(Subject::Entity(EntityId(n))),
            Err(_) => s.parse().map(Subject::Group),
        }
    }
}

impl Serialize for Subject {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Subject::Entity(id) => serializer.serialize_u64(id.0),
            Subject::Group(key) => serializer.collect_str(key),
        }
    }
}

impl<'de> Deserialize<'de> for Subject {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Id(u64),
            Text(String),
        }
        match Wire::deserialize(deserializer)? {
            Wire::Id(n) => Ok(Subject::Entity(EntityId(n))),
            Wire::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
