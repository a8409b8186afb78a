use serde::{Deserialize, Serialize};

use crate::attributes::{extract_attributes, tag_pos, AttributeLink};
use crate::entities::{detect_mentions, resolve_paragraph, EntityRef, Mention, MentionKind, RegistryView};
use crate::text::{group_by_sentence, Pos, Segmenter, Span, Token};

/// Pipeline output for one paragraph, in paragraph-relative coordinates:
/// spans start at the paragraph's first character and sentences are
/// numbered from 1 within the paragraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParagraphAnalysis {
    pub content_hash: u64,
    pub sentence_count: usize,
    pub sentences: Vec<Span>,
    pub tokens: Vec<Token>,
    pub mentions: Vec<Mention>,
    pub attribute_links: Vec<AttributeLink<EntityRef>>,
}

/// Runs segmentation, detection, tagging, resolution and linking over one
/// paragraph.
pub fn analyze_paragraph(text: &str, content_hash: u64, view: &RegistryView<'_>) -> ParagraphAnalysis {
    let (sentences, mut tokens) = Segmenter::shared().segment_paragraph(text, 0, 0, 1);
    let detected = detect_mentions(text, &tokens, view);
    mark_names(&mut tokens, &detected);
    tag_pos(&mut tokens, view.lexicons);
    let mentions = resolve_paragraph(detected, view);
    let attribute_links = link_sentences(&tokens, &mentions, view);
    ParagraphAnalysis {
        content_hash,
        sentence_count: sentences.len(),
        sentences: sentences.into_iter().map(|s| s.span).collect(),
        tokens,
        mentions,
        attribute_links,
    }
}

/// Tokens inside a name mention are proper nouns whatever the lexicon says.
pub(crate) fn mark_names(tokens: &mut [Token], mentions: &[Mention]) {
    let mut names = mentions.iter().filter(|m| m.kind != MentionKind::Pronoun).peekable();
    for token in tokens.iter_mut() {
        while names.peek().is_some_and(|m| m.span.end <= token.span.start) {
            names.next();
        }
        if names.peek().is_some_and(|m| m.span.contains(&token.span)) {
            token.pos = Some(Pos::Proper);
        }
    }
}

pub(crate) fn link_sentences(
    tokens: &[Token],
    mentions: &[Mention],
    view: &RegistryView<'_>,
) -> Vec<AttributeLink<EntityRef>> {
    let mut links = Vec::new();
    let mut rest = mentions;
    for sentence in group_by_sentence(tokens) {
        let index = sentence[0].sentence_index;
        let skip = rest.iter().take_while(|m| m.sentence_index < index).count();
        rest = &rest[skip..];
        let here = rest.iter().take_while(|m| m.sentence_index == index).count();
        links.extend(extract_attributes(sentence, &rest[..here], view.lexicons));
        rest = &rest[here..];
    }
    links
}
