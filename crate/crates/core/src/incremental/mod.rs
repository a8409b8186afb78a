//! Paragraph-level incremental analysis.
//!
//! Paragraph results are cached by content hash. On each call only
//! paragraphs missing from the cache run through the pipeline; everything
//! is then re-based into document coordinates and mapped through the
//! registry. The result is always identical to analyzing from scratch with
//! the same starting registry.

mod cache;
mod paragraph;
mod snapshot;

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::attributes::tag_pos;
use crate::entities::{gold_pos_overrides, import_annotations, AnnotationError, EntityRef, GoldRecord, Mention, RegistryView};
use crate::lexicon::Lexicons;
use crate::registry::{EntityId, Registry};
use crate::text::{apply_delta, diff_paragraphs, split_paragraphs, DeltaOp, Paragraph, Segmenter, Sentence};

pub use cache::ParagraphCache;
pub use paragraph::{analyze_paragraph, ParagraphAnalysis};
pub use snapshot::{AnalysisSnapshot, MentionRef};

use paragraph::{link_sentences, mark_names};
use snapshot::SnapshotBuilder;

/// What happened to the client's delta hint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum DeltaHint {
    Absent,
    Applied,
    /// The hint was malformed or did not reproduce the document; full hash
    /// reconciliation was used.
    Discarded(String),
}

#[derive(Debug, Clone)]
pub struct AnalyzeOutcome {
    pub snapshot: Arc<AnalysisSnapshot>,
    /// Indices of new paragraphs not aligned with the previous document.
    pub changed_paragraphs: BTreeSet<usize>,
    /// Paragraphs that ran through the pipeline (cache misses).
    pub pipeline_runs: usize,
    /// Characters auto-promoted during this call, in document order.
    pub promoted: Vec<EntityId>,
    pub delta_hint: DeltaHint,
}

struct Previous {
    document: String,
    paragraphs: Vec<Paragraph>,
    snapshot: Arc<AnalysisSnapshot>,
}

/// Owns the paragraph cache and the latest snapshot for one project.
pub struct Orchestrator {
    lexicons: Arc<Lexicons>,
    cache: ParagraphCache,
    previous: Option<Previous>,
    next_version: u64,
}

impl Default for Orchestrator {
    fn default() -> Self {
        Orchestrator::new(Arc::new(Lexicons::bundled().clone()))
    }
}

impl Orchestrator {
    pub fn new(lexicons: Arc<Lexicons>) -> Self {
        Orchestrator {
            lexicons,
            cache: ParagraphCache::new(),
            previous: None,
            next_version: 1,
        }
    }

    pub fn lexicons(&self) -> &Lexicons {
        &self.lexicons
    }

    pub fn cache(&self) -> &ParagraphCache {
        &self.cache
    }

    /// The most recent snapshot, if any analysis ran.
    pub fn snapshot(&self) -> Option<Arc<AnalysisSnapshot>> {
        self.previous.as_ref().map(|p| Arc::clone(&p.snapshot))
    }

    /// Drops the cache and the previous snapshot. Snapshot versions keep
    /// increasing. Needed when the registry is replaced wholesale.
    pub fn reset(&mut self) {
        self.cache.clear();
        self.previous = None;
    }

    /// Evicts cache entries that registry changes since the last call may
    /// have made stale. Returns the eviction count.
    pub fn invalidate_on_registry_change(&mut self, registry: &Registry) -> usize {
        self.cache.invalidate(registry)
    }

    /// Analyzes `document`, reusing cached paragraphs. New names are
    /// promoted into `registry`.
    pub fn analyze(&mut self, document: &str, delta: Option<&[DeltaOp]>, registry: &mut Registry) -> AnalyzeOutcome {
        let delta_hint = self.check_hint(document, delta);
        let paragraphs = split_paragraphs(document);
        let new_paragraphs: Vec<Paragraph> = paragraphs.iter().map(|(p, _)| p.clone()).collect();
        let changed_paragraphs = match &self.previous {
            Some(prev) => diff_paragraphs(&prev.paragraphs, &new_paragraphs),
            None => (0..new_paragraphs.len()).collect(),
        };
        if self.cache.is_empty() || registry.version() != self.cache.valid_at() {
            self.cache.invalidate(registry);
        }

        if let Some(prev) = &self.previous {
            if prev.document == document && prev.snapshot.registry_version == registry.version() {
                return AnalyzeOutcome {
                    snapshot: Arc::clone(&prev.snapshot),
                    changed_paragraphs,
                    pipeline_runs: 0,
                    promoted: Vec::new(),
                    delta_hint,
                };
            }
        }

        let mut pipeline_runs = 0;
        let mut promoted = Vec::new();
        loop {
            pipeline_runs += self.fill_cache(&paragraphs, registry);
            let newly = promote_provisionals(&paragraphs, &self.cache, registry);
            if newly.is_empty() {
                break;
            }
            promoted.extend(newly);
            self.cache.invalidate(registry);
        }

        let keep: HashSet<u64> = new_paragraphs.iter().map(|p| p.content_hash).collect();
        self.cache.retain(&keep);

        let mut builder = SnapshotBuilder::new(registry);
        for (paragraph, text) in &paragraphs {
            let analysis = self
                .cache
                .get(paragraph.content_hash, text)
                .expect("every paragraph was analyzed");
            push_paragraph(&mut builder, paragraph, analysis);
        }
        let snapshot = Arc::new(builder.finish(self.bump_version()));
        self.previous = Some(Previous {
            document: document.to_string(),
            paragraphs: new_paragraphs,
            snapshot: Arc::clone(&snapshot),
        });
        AnalyzeOutcome {
            snapshot,
            changed_paragraphs,
            pipeline_runs,
            promoted,
            delta_hint,
        }
    }

    /// Builds a snapshot from gold annotations instead of the detection and
    /// resolution passes. Unknown entity keys become characters. Tagging
    /// and attribute linking still run, honoring any gold tags.
    pub fn analyze_gold(
        &mut self,
        document: &str,
        gold: &[GoldRecord],
        registry: &mut Registry,
    ) -> Result<AnalyzeOutcome, AnnotationError> {
        let overrides = gold_pos_overrides(document, gold)?;
        let before: HashSet<EntityId> = registry.records().map(|r| r.id).collect();
        let mentions = import_annotations(document, gold, registry)?;
        let promoted: Vec<EntityId> = registry
            .records()
            .map(|r| r.id)
            .filter(|id| !before.contains(id))
            .collect();

        let segmentation = Segmenter::shared().segment(document);
        let mut tokens = segmentation.tokens;
        mark_names(&mut tokens, &mentions);
        for token in &mut tokens {
            if let Some((_, pos)) = overrides.iter().find(|(span, _)| span.overlaps(&token.span)) {
                token.pos = Some(*pos);
            }
        }
        tag_pos(&mut tokens, &self.lexicons);
        let view = RegistryView::new(registry, &self.lexicons);
        let links = link_sentences(&tokens, &mentions, &view);

        let mut builder = SnapshotBuilder::new(registry);
        for p in segmentation.paragraphs.iter().cloned() {
            builder.push_paragraph(p);
        }
        for s in segmentation.sentences {
            builder.push_sentence(s);
        }
        builder.count_words(&tokens);
        for m in mentions {
            builder.push_mention(m);
        }
        for l in links {
            builder.push_link(l);
        }
        let snapshot = Arc::new(builder.finish(self.bump_version()));
        // The gold snapshot is not reusable for incremental calls.
        self.previous = None;
        self.cache.clear();
        Ok(AnalyzeOutcome {
            snapshot,
            changed_paragraphs: (0..segmentation.paragraphs.len()).collect(),
            pipeline_runs: segmentation.paragraphs.len(),
            promoted,
            delta_hint: DeltaHint::Absent,
        })
    }

    fn bump_version(&mut self) -> u64 {
        let v = self.next_version;
        self.next_version += 1;
        v
    }

    fn check_hint(&self, document: &str, delta: Option<&[DeltaOp]>) -> DeltaHint {
        let Some(delta) = delta else {
            return DeltaHint::Absent;
        };
        let Some(prev) = &self.previous else {
            return DeltaHint::Discarded("no previous document to apply the delta to".into());
        };
        match apply_delta(&prev.document, delta) {
            Ok(text) if text == document => DeltaHint::Applied,
            Ok(_) => DeltaHint::Discarded("delta does not reproduce the submitted document".into()),
            Err(e) => DeltaHint::Discarded(e.to_string()),
        }
    }

    /// Runs the pipeline on every distinct paragraph missing from the cache.
    fn fill_cache(&mut self, paragraphs: &[(Paragraph, &str)], registry: &Registry) -> usize {
        let mut seen = HashSet::new();
        let missing: Vec<(u64, &str)> = paragraphs
            .iter()
            .filter(|(p, text)| self.cache.get(p.content_hash, text).is_none())
            .filter(|(p, _)| seen.insert(p.content_hash))
            .map(|(p, text)| (p.content_hash, *text))
            .collect();
        if missing.is_empty() {
            return 0;
        }
        let view = RegistryView::new(registry, &self.lexicons);
        let analyzed: Vec<(&str, ParagraphAnalysis)> = missing
            .par_iter()
            .map(|&(hash, text)| (text, analyze_paragraph(text, hash, &view)))
            .collect();
        let runs = analyzed.len();
        for (text, analysis) in analyzed {
            self.cache.insert(text, analysis);
        }
        runs
    }
}

/// Registers every provisional name that has no record yet, in document
/// order, using its first surface form as the canonical name.
fn promote_provisionals(
    paragraphs: &[(Paragraph, &str)],
    cache: &ParagraphCache,
    registry: &mut Registry,
) -> Vec<EntityId> {
    let mut promoted = Vec::new();
    for (p, text) in paragraphs {
        let analysis = cache.get(p.content_hash, text).expect("analyzed");
        for m in &analysis.mentions {
            if let EntityRef::Provisional(key) = &m.entity {
                if registry.lookup(key).is_none() {
                    if let Ok(id) = registry.promote(&m.surface) {
                        promoted.push(id);
                    }
                }
            }
        }
    }
    promoted
}

fn push_paragraph(builder: &mut SnapshotBuilder<'_>, paragraph: &Paragraph, analysis: &ParagraphAnalysis) {
    let char_offset = paragraph.span.start;
    let sentence_offset = builder.sentence_count();
    builder.push_paragraph(paragraph.clone());
    for (i, span) in analysis.sentences.iter().enumerate() {
        builder.push_sentence(Sentence {
            index: sentence_offset + i + 1,
            span: span.shifted(char_offset),
            paragraph_index: paragraph.index,
        });
    }
    builder.count_words(&analysis.tokens);
    for m in &analysis.mentions {
        builder.push_mention(Mention {
            span: m.span.shifted(char_offset),
            sentence_index: m.sentence_index + sentence_offset,
            ..m.clone()
        });
    }
    for l in &analysis.attribute_links {
        let mut link = l.clone();
        link.source_span = link.source_span.shifted(char_offset);
        link.sentence_index += sentence_offset;
        builder.push_link(link);
    }
}
