//! Part-of-speech tagging and descriptor/action linking.

mod links;
mod tag;

use serde::{Deserialize, Serialize};

use crate::registry::EntityId;
use crate::text::{Pos, Span};

pub use links::extract_attributes;
pub use tag::tag_pos;

/// An adjective or verb attached to a character.
///
/// `E` is [`EntityId`] in snapshots; inside the pipeline it is an
/// [`crate::entities::EntityRef`] because names may not be registered yet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AttributeLink<E = EntityId> {
    /// Case-folded surface form.
    pub word: String,
    pub pos_class: Pos,
    pub entity: E,
    pub sentence_index: usize,
    pub source_span: Span,
}

impl<E> AttributeLink<E> {
    pub fn map_entity<F>(self, f: impl FnOnce(E) -> F) -> AttributeLink<F> {
        AttributeLink {
            word: self.word,
            pos_class: self.pos_class,
            entity: f(self.entity),
            sentence_index: self.sentence_index,
            source_span: self.source_span,
        }
    }
}
