use std::collections::HashSet;

use crate::lexicon::{Gender, Lexicons};
use crate::text::{group_by_sentence, Span, Token};

use super::{EntityRef, Mention, MentionKind, RegistryView};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PronounClass {
    Feminine,
    Masculine,
    Plural,
}

/// Third-person personal pronouns that can refer to a character.
pub fn pronoun_class(word: &str) -> Option<PronounClass> {
    match word.to_lowercase().as_str() {
        "she" | "her" | "hers" | "herself" => Some(PronounClass::Feminine),
        "he" | "him" | "his" | "himself" => Some(PronounClass::Masculine),
        "they" | "them" | "their" | "theirs" | "themselves" | "themself" => {
            Some(PronounClass::Plural)
        }
        _ => None,
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    start: usize,
    end: usize,
    kind: MentionKind,
    entity: Option<crate::registry::EntityId>,
    title_gender: Option<Gender>,
}

/// NAMED and ALIAS mentions in one paragraph. `text` is the paragraph text
/// and token spans are relative to it.
pub fn detect_named_mentions(text: &str, tokens: &[Token], view: &RegistryView<'_>) -> Vec<Mention> {
    let lex = view.lexicons;
    let offsets = CharOffsets::new(text);
    let sentences = group_by_sentence(tokens);

    // Capitalized surfaces seen away from a sentence start in this paragraph.
    let mut seen_inside: HashSet<&str> = HashSet::new();
    for sentence in &sentences {
        for (i, token) in sentence.iter().enumerate() {
            if token.is_capitalized() && !is_initial(sentence, i) {
                seen_inside.insert(token.text.as_str());
            }
        }
    }

    let mut mentions = Vec::new();
    for sentence in &sentences {
        let mut candidates = named_candidates(sentence, lex, &seen_inside);
        candidates.extend(alias_candidates(sentence, view));
        candidates.sort_by(|a, b| {
            a.start
                .cmp(&b.start)
                .then((b.end - b.start).cmp(&(a.end - a.start)))
                .then(a.kind.cmp(&b.kind))
        });
        let mut taken_until = 0;
        for cand in candidates {
            if cand.start < taken_until {
                continue;
            }
            taken_until = cand.end;
            let span = Span::new(sentence[cand.start].span.start, sentence[cand.end - 1].span.end);
            let surface = offsets.slice(text, span).to_string();
            let entity = match cand.entity {
                Some(id) => EntityRef::Entity(id),
                None => view.bind_name(&surface),
            };
            mentions.push(Mention {
                span,
                sentence_index: sentence[cand.start].sentence_index,
                surface,
                entity,
                kind: cand.kind,
                title_gender: cand.title_gender,
            });
        }
    }
    mentions
}

/// PRONOUN mentions, all unresolved.
pub fn detect_pronouns(tokens: &[Token]) -> Vec<Mention> {
    tokens
        .iter()
        .filter(|t| pronoun_class(&t.text).is_some())
        .map(|t| Mention {
            span: t.span,
            sentence_index: t.sentence_index,
            surface: t.text.clone(),
            entity: EntityRef::Unresolved,
            kind: MentionKind::Pronoun,
            title_gender: None,
        })
        .collect()
}

/// All mentions of a paragraph in text order.
pub fn detect_mentions(text: &str, tokens: &[Token], view: &RegistryView<'_>) -> Vec<Mention> {
    let mut all = detect_named_mentions(text, tokens, view);
    all.extend(detect_pronouns(tokens));
    all.sort_by_key(|m| (m.span.start, m.span.end));
    all
}

fn named_candidates(sentence: &[Token], lex: &Lexicons, seen_inside: &HashSet<&str>) -> Vec<Candidate> {
    let is_name = |t: &Token| is_name_token(t, lex);
    let mut out = Vec::new();
    let mut i = 0;
    while i < sentence.len() {
        if !is_name(&sentence[i]) {
            i += 1;
            continue;
        }
        let mut end = i;
        while end < sentence.len() && is_name(&sentence[end]) {
            end += 1;
        }
        let mut start = i;
        let first = &sentence[start];
        if is_initial(sentence, start)
            && !lex.is_honorific(&first.text)
            && lex.is_common_word(&first.text.to_lowercase())
            && lex.gender_of(&first.text).is_none()
            && !seen_inside.contains(first.text.as_str())
        {
            start += 1;
        }
        let mut name_start = start;
        let mut title_gender = None;
        while name_start < end && lex.is_honorific(&sentence[name_start].text) {
            title_gender = title_gender.or(lex.gender_of(&sentence[name_start].text));
            name_start += 1;
        }
        if name_start == end {
            // Only titles ("the Queen"): the title itself names the character.
            name_start = start;
        }
        if name_start < end {
            out.push(Candidate {
                start: name_start,
                end,
                kind: MentionKind::Named,
                entity: None,
                title_gender,
            });
        }
        i = end;
    }
    out
}

fn alias_candidates(sentence: &[Token], view: &RegistryView<'_>) -> Vec<Candidate> {
    let mut out = Vec::new();
    for start in 0..sentence.len() {
        for (alias, owner) in view.aliases_starting_with(&sentence[start].text) {
            let end = start + alias.len();
            if end <= sentence.len()
                && sentence[start..end]
                    .iter()
                    .zip(alias)
                    .all(|(t, a)| t.text == *a)
            {
                out.push(Candidate {
                    start,
                    end,
                    kind: MentionKind::Alias,
                    entity: Some(*owner),
                    title_gender: None,
                });
                break;
            }
        }
    }
    out
}

fn is_name_token(token: &Token, lex: &Lexicons) -> bool {
    if !token.is_word() || !token.is_capitalized() {
        return false;
    }
    let lower = token.text.trim_end_matches('.').to_lowercase();
    if lex.is_honorific(&lower) {
        return true;
    }
    if lex.stoplist.contains(&lower) || lex.closed.contains_key(&lower) {
        return false;
    }
    if token.text.chars().all(|c| c.is_ascii_digit()) {
        return false;
    }
    let roman = token.text.len() >= 2 && token.text.chars().all(|c| "IVXLCDM".contains(c));
    !roman
}

/// First word of the sentence, or first word after an opening quote or dash.
fn is_initial(sentence: &[Token], i: usize) -> bool {
    if sentence[..i].iter().all(|t| !t.is_word()) {
        return true;
    }
    matches!(
        sentence[i - 1].text.as_str(),
        "\u{201c}" | "\u{2018}" | "\"" | "'" | "(" | "[" | "\u{2014}" | "\u{2013}" | ":"
    )
}

/// Char-offset to byte-offset table for one paragraph.
pub(crate) struct CharOffsets(Vec<usize>);

impl CharOffsets {
    pub(crate) fn new(text: &str) -> Self {
        let mut v: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        v.push(text.len());
        CharOffsets(v)
    }

    pub(crate) fn slice<'t>(&self, text: &'t str, span: Span) -> &'t str {
        &text[self.0[span.start]..self.0[span.end]]
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::Registry;
    use crate::text::segment;

    fn named(doc: &str, reg: &Registry) -> Vec<(String, MentionKind)> {
        let lex = Lexicons::bundled();
        let view = RegistryView::new(reg, lex);
        let seg = segment(doc);
        detect_named_mentions(doc, &seg.tokens, &view)
            .into_iter()
            .map(|m| (m.surface, m.kind))
            .collect()
    }

    #[test]
    fn two_person_sequences() {
        let found = named("Wendy met Peter Pan.", &Registry::default());
        assert_eq!(
            found,
            vec![
                ("Wendy".to_string(), MentionKind::Named),
                ("Peter Pan".to_string(), MentionKind::Named)
            ]
        );
    }

    #[test]
    fn stoplist_excludes_places() {
        assert!(named("She saw the Thames.", &Registry::default()).is_empty());
    }

    #[test]
    fn sentence_initial_common_words_are_skipped() {
        assert!(named("The dog barked. Still nothing.", &Registry::default()).is_empty());
        // "Rose" is also a common word, but it appears mid-sentence too.
        let found = named("Hope faded. Then Hope sang.", &Registry::default());
        assert_eq!(found.len(), 2);
        // Known first names survive at the start of a sentence.
        let found = named("Peter smiled.", &Registry::default());
        assert_eq!(found.len(), 1);
    }

    #[test]
    fn honorifics_are_stripped_and_hint_gender() {
        let lex = Lexicons::bundled();
        let view = RegistryView::empty(lex);
        let doc = "Then Mrs. Darling and the Queen left.";
        let seg = segment(doc);
        let found = detect_named_mentions(doc, &seg.tokens, &view);
        assert_eq!(found[0].surface, "Darling");
        assert_eq!(found[0].title_gender, Some(Gender::Feminine));
        assert_eq!(found[1].surface, "Queen");
    }

    #[test]
    fn aliases_match_exactly_and_longest_wins() {
        let doc = "the zr'kath hissed while Zr'kath watched.";
        let mut reg = Registry::default();
        reg.add_manual(doc, "Zr'kath", Span::new(25, 32)).unwrap();
        let found = named(doc, &reg);
        assert_eq!(found, vec![("Zr'kath".to_string(), MentionKind::Named)]);

        let doc = "they called him old Nana today.";
        let mut reg = Registry::default();
        reg.add_manual(doc, "old Nana", Span::new(16, 24)).unwrap();
        assert_eq!(
            named(doc, &reg),
            vec![("old Nana".to_string(), MentionKind::Alias)]
        );
    }

    #[test]
    fn possessive_counts_the_name_only() {
        let found = named("He took Wendy's hand.", &Registry::default());
        assert_eq!(found, vec![("Wendy".to_string(), MentionKind::Named)]);
    }

    #[test]
    fn pronouns_are_collected() {
        let seg = segment("She told him that they were late.");
        let p: Vec<String> = detect_pronouns(&seg.tokens)
            .into_iter()
            .map(|m| m.surface)
            .collect();
        assert_eq!(p, vec!["She", "him", "they"]);
    }
}
