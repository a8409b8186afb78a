//! Person mention detection and paragraph-local coreference.
//!
//! Detection finds capitalized name sequences and exact registry aliases;
//! pronouns are collected separately. [`resolve_paragraph`] then runs an
//! ordered sieve that never looks outside the paragraph, which is what
//! lets paragraphs be analyzed independently and cached.

mod detect;
mod gold;
mod resolve;
mod view;

use serde::{Deserialize, Serialize};

use crate::lexicon::Gender;
use crate::registry::EntityId;
use crate::text::Span;

pub use detect::{detect_mentions, detect_named_mentions, detect_pronouns, pronoun_class, PronounClass};
pub use gold::{gold_pos_overrides, import_annotations, parse_gold, AnnotationError, GoldRecord};
pub use resolve::resolve_paragraph;
pub use view::RegistryView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MentionKind {
    Named,
    Alias,
    Pronoun,
}

/// What a mention refers to inside the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityRef {
    Entity(EntityId),
    /// A name with no registry record yet, keyed by its lowercase surface.
    Provisional(String),
    Unresolved,
}

impl EntityRef {
    pub fn is_resolved(&self) -> bool {
        !matches!(self, EntityRef::Unresolved)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mention {
    pub span: Span,
    pub sentence_index: usize,
    pub surface: String,
    pub entity: EntityRef,
    pub kind: MentionKind,
    /// Gender implied by a title in front of the name ("Mrs.", "Prince").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_gender: Option<Gender>,
}
