use serde::{Deserialize, Serialize};

use crate::registry::{EntityId, Registry};
use crate::text::{split_paragraphs, Pos, Segmenter, Span};

use super::detect::CharOffsets;
use super::{EntityRef, Mention, MentionKind};

/// One line of a gold annotation file. Offsets are character offsets
/// relative to the start of paragraph `para_index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldRecord {
    pub para_index: usize,
    pub start: usize,
    pub end: usize,
    pub kind: MentionKind,
    pub entity_key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<String>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AnnotationError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("record {record}: span {start}..{end} is outside paragraph {para_index}")]
    SpanOutOfRange {
        record: usize,
        para_index: usize,
        start: usize,
        end: usize,
    },
    #[error("record {record}: unknown part-of-speech class {class:?}")]
    UnknownPosClass { record: usize, class: String },
}

/// Parses line-delimited JSON gold records; blank lines are skipped.
pub fn parse_gold(jsonl: &str) -> Result<Vec<GoldRecord>, AnnotationError> {
    jsonl
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| AnnotationError::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Turns gold records into mentions, bypassing detection and the sieve.
///
/// `entity_key` is matched against canonical names (case-insensitively);
/// unknown keys become new characters named after the key. Nothing is
/// touched in the registry unless every record validates.
pub fn import_annotations(
    document: &str,
    gold: &[GoldRecord],
    registry: &mut Registry,
) -> Result<Vec<Mention>, AnnotationError> {
    let located = locate(document, gold)?;
    let segmentation = Segmenter::shared().segment(document);
    let offsets = CharOffsets::new(document);

    let mut mentions = Vec::with_capacity(gold.len());
    for (record, (span, _)) in gold.iter().zip(located) {
        let id = entity_for_key(registry, &record.entity_key);
        let sentence_index = segmentation
            .sentences
            .partition_point(|s| s.span.start <= span.start)
            .max(1);
        mentions.push(Mention {
            span,
            sentence_index: segmentation
                .sentences
                .get(sentence_index - 1)
                .map_or(1, |s| s.index),
            surface: offsets.slice(document, span).to_string(),
            entity: EntityRef::Entity(id),
            kind: record.kind,
            title_gender: None,
        });
    }
    mentions.sort_by_key(|m| (m.span.start, m.span.end));
    Ok(mentions)
}

/// Part-of-speech overrides carried by gold records, as document spans.
pub fn gold_pos_overrides(
    document: &str,
    gold: &[GoldRecord],
) -> Result<Vec<(Span, Pos)>, AnnotationError> {
    Ok(locate(document, gold)?
        .into_iter()
        .filter_map(|(span, pos)| pos.map(|p| (span, p)))
        .collect())
}

fn locate(document: &str, gold: &[GoldRecord]) -> Result<Vec<(Span, Option<Pos>)>, AnnotationError> {
    let paragraphs = split_paragraphs(document);
    gold.iter()
        .enumerate()
        .map(|(i, record)| {
            let out_of_range = || AnnotationError::SpanOutOfRange {
                record: i,
                para_index: record.para_index,
                start: record.start,
                end: record.end,
            };
            let (paragraph, _) = paragraphs.get(record.para_index).ok_or_else(out_of_range)?;
            if record.start >= record.end || record.end > paragraph.span.len() {
                return Err(out_of_range());
            }
            let pos = record
                .pos
                .as_deref()
                .map(|p| {
                    p.parse::<Pos>().map_err(|class| AnnotationError::UnknownPosClass {
                        record: i,
                        class,
                    })
                })
                .transpose()?;
            Ok((
                Span::new(record.start, record.end).shifted(paragraph.span.start),
                pos,
            ))
        })
        .collect()
}

fn entity_for_key(registry: &mut Registry, key: &str) -> EntityId {
    let wanted = key.trim().to_lowercase();
    let existing = registry
        .live()
        .find(|r| r.canonical_name.to_lowercase() == wanted)
        .map(|r| r.id)
        .or_else(|| registry.lookup(key));
    match existing {
        Some(id) => registry.resolve(id).unwrap_or(id),
        None => registry
            .promote(key.trim())
            .expect("key has no alias match, so promotion cannot collide"),
    }
}
