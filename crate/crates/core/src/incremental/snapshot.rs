use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::attributes::AttributeLink;
use crate::entities::{EntityRef, Mention, MentionKind};
use crate::registry::{EntityId, Registry};
use crate::text::{Paragraph, Sentence, Span, Token};

/// Where one character is mentioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionRef {
    pub sentence_index: usize,
    pub span: Span,
    pub kind: MentionKind,
}

/// Immutable document-level view of an analysis.
///
/// Entities are already mapped through the registry: provisional names to
/// their records, merged records to their targets. `entity_mentions` and
/// `attribute_links` only cover live characters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisSnapshot {
    pub snapshot_version: u64,
    pub registry_version: u64,
    #[serde(rename = "S")]
    pub sentence_count: usize,
    pub paragraphs: Vec<Paragraph>,
    pub sentences: Vec<Sentence>,
    pub mentions: Vec<Mention>,
    pub entity_mentions: BTreeMap<EntityId, Vec<MentionRef>>,
    pub attribute_links: Vec<AttributeLink>,
    /// Case-folded word token counts over the whole document.
    pub word_frequencies: BTreeMap<String, u64>,
}

/// Equality compares content only; `snapshot_version` is bookkeeping.
impl PartialEq for AnalysisSnapshot {
    fn eq(&self, other: &Self) -> bool {
        self.registry_version == other.registry_version
            && self.sentence_count == other.sentence_count
            && self.paragraphs == other.paragraphs
            && self.sentences == other.sentences
            && self.mentions == other.mentions
            && self.entity_mentions == other.entity_mentions
            && self.attribute_links == other.attribute_links
            && self.word_frequencies == other.word_frequencies
    }
}

impl Eq for AnalysisSnapshot {}

impl AnalysisSnapshot {
    pub fn empty(registry_version: u64) -> Self {
        AnalysisSnapshot {
            snapshot_version: 0,
            registry_version,
            sentence_count: 0,
            paragraphs: Vec::new(),
            sentences: Vec::new(),
            mentions: Vec::new(),
            entity_mentions: BTreeMap::new(),
            attribute_links: Vec::new(),
            word_frequencies: BTreeMap::new(),
        }
    }

    /// Mentions of live characters, summed.
    pub fn resolved_mention_count(&self) -> usize {
        self.entity_mentions.values().map(Vec::len).sum()
    }

    /// Character span covering sentences `first..=last` (1-based).
    pub fn sentence_range_span(&self, first: usize, last: usize) -> Option<Span> {
        let a = self.sentences.get(first.checked_sub(1)?)?;
        let b = self.sentences.get(last.checked_sub(1)?)?;
        Some(Span::new(a.span.start, b.span.end))
    }
}

/// Accumulates document-level pieces and applies the registry mapping.
pub(crate) struct SnapshotBuilder<'r> {
    registry: &'r Registry,
    resolved: HashMap<EntityRef, Option<EntityId>>,
    snapshot: AnalysisSnapshot,
    words: HashMap<String, u64>,
}

impl<'r> SnapshotBuilder<'r> {
    pub(crate) fn new(registry: &'r Registry) -> Self {
        SnapshotBuilder {
            registry,
            resolved: HashMap::new(),
            snapshot: AnalysisSnapshot::empty(registry.version()),
            words: HashMap::new(),
        }
    }

    fn map(&mut self, entity: &EntityRef) -> Option<EntityId> {
        if let Some(hit) = self.resolved.get(entity) {
            return *hit;
        }
        let id = match entity {
            EntityRef::Entity(id) => self.registry.resolve(*id),
            EntityRef::Provisional(key) => self
                .registry
                .lookup(key)
                .and_then(|id| self.registry.resolve(id)),
            EntityRef::Unresolved => None,
        };
        self.resolved.insert(entity.clone(), id);
        id
    }

    fn is_live(&self, id: EntityId) -> bool {
        self.registry.get(id).is_some_and(|r| r.is_live())
    }

    pub(crate) fn sentence_count(&self) -> usize {
        self.snapshot.sentences.len()
    }

    pub(crate) fn push_paragraph(&mut self, paragraph: Paragraph) {
        self.snapshot.paragraphs.push(paragraph);
    }

    pub(crate) fn push_sentence(&mut self, sentence: Sentence) {
        self.snapshot.sentences.push(sentence);
    }

    pub(crate) fn count_words<'t>(&mut self, tokens: impl IntoIterator<Item = &'t Token>) {
        for t in tokens.into_iter().filter(|t| t.is_word()) {
            let lower = t.text.to_lowercase();
            *self.words.entry(lower).or_insert(0) += 1;
        }
    }

    /// `mention` must already be in document coordinates.
    pub(crate) fn push_mention(&mut self, mut mention: Mention) {
        let id = self.map(&mention.entity);
        mention.entity = id.map_or(EntityRef::Unresolved, EntityRef::Entity);
        if let Some(id) = id.filter(|&id| self.is_live(id)) {
            self.snapshot.entity_mentions.entry(id).or_default().push(MentionRef {
                sentence_index: mention.sentence_index,
                span: mention.span,
                kind: mention.kind,
            });
        }
        self.snapshot.mentions.push(mention);
    }

    pub(crate) fn push_link(&mut self, link: AttributeLink<EntityRef>) {
        if let Some(id) = self.map(&link.entity).filter(|&id| self.is_live(id)) {
            self.snapshot.attribute_links.push(link.map_entity(|_| id));
        }
    }

    pub(crate) fn finish(mut self, snapshot_version: u64) -> AnalysisSnapshot {
        self.snapshot.snapshot_version = snapshot_version;
        self.snapshot.sentence_count = self.snapshot.sentences.len();
        self.snapshot.word_frequencies = self.words.into_iter().collect();
        self.snapshot
    }
}
