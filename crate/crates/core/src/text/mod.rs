//! Document text model: spans, deterministic segmentation into
//! paragraphs, sentences and tokens, edit deltas, and paragraph diffing.
//!
//! All offsets are counted in Unicode scalar values, never bytes, so the
//! positions can be handed straight to an editor widget.

mod delta;
mod diff;
pub(crate) mod segment;

use serde::{Deserialize, Serialize};
use std::fmt;

pub use delta::{apply_delta, touched_range, DeltaOp};
pub use diff::diff_paragraphs;
pub use segment::{
    content_hash, group_by_sentence, segment, split_paragraphs, Segmentation, Segmenter,
};

/// Half-open range of character offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end, "span start {start} after end {end}");
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    /// Moves the span right by `offset` characters.
    pub fn shifted(&self, offset: usize) -> Span {
        Span::new(self.start + offset, self.end + offset)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paragraph {
    pub index: usize,
    pub span: Span,
    pub content_hash: u64,
}

/// A sentence; `index` is 1-based across the whole document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub index: usize,
    pub span: Span,
    pub paragraph_index: usize,
}

/// Coarse part-of-speech classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Proper,
    Pronoun,
    Adj,
    Verb,
    Other,
}

impl Pos {
    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Proper => "PROPER",
            Pos::Pronoun => "PRONOUN",
            Pos::Adj => "ADJ",
            Pos::Verb => "VERB",
            Pos::Other => "OTHER",
        }
    }
}

impl std::str::FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "NOUN" => Ok(Pos::Noun),
            "PROPER" => Ok(Pos::Proper),
            "PRONOUN" => Ok(Pos::Pronoun),
            "ADJ" => Ok(Pos::Adj),
            "VERB" => Ok(Pos::Verb),
            "OTHER" => Ok(Pos::Other),
            other => Err(other.to_string()),
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub span: Span,
    pub sentence_index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<Pos>,
}

impl Token {
    /// True when the token is made of letters or digits rather than punctuation.
    pub fn is_word(&self) -> bool {
        self.text.chars().next().is_some_and(char::is_alphanumeric)
    }

    pub fn is_capitalized(&self) -> bool {
        self.text.chars().next().is_some_and(char::is_uppercase)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TextError {
    #[error("malformed delta: {0}")]
    MalformedDelta(String),
}

/// Number of characters (Unicode scalar values) in `text`.
pub fn char_len(text: &str) -> usize {
    text.chars().count()
}

/// Slices `text` by character offsets.
pub fn slice_chars(text: &str, span: Span) -> &str {
    let mut indices = text.char_indices().map(|(i, _)| i).chain(std::iter::once(text.len()));
    let start = indices.nth(span.start).unwrap_or(text.len());
    let end = if span.is_empty() {
        start
    } else {
        indices.nth(span.len() - 1).unwrap_or(text.len())
    };
    &text[start..end]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_by_scalar_offsets() {
        let text = "héllo wörld";
        assert_eq!(slice_chars(text, Span::new(0, 5)), "héllo");
        assert_eq!(slice_chars(text, Span::new(6, 11)), "wörld");
        assert_eq!(slice_chars(text, Span::new(3, 3)), "");
    }

    #[test]
    fn pos_parses_case_insensitively() {
        assert_eq!("adj".parse::<Pos>(), Ok(Pos::Adj));
        assert!("ADVERB".parse::<Pos>().is_err());
    }
}
