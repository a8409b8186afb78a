use crate::entities::{EntityRef, Mention, MentionKind};
use crate::lexicon::{Lexicons, Role};
use crate::text::{Pos, Token};

use super::AttributeLink;

const SUBJECT_FORMS: &[&str] = &["he", "she", "they"];

struct Anchor<'m> {
    mention: &'m Mention,
    first: usize,
    last: usize,
}

/// Links adjectives and verbs in one tagged sentence to the character
/// mentions they describe.
///
/// Patterns, tried in this order (a token links at most once):
/// copular (`Wendy was kind`), prenominal (`brave Peter`), appositive
/// (`Dolly, tired and jealous, ...`) and subject-verb (`Peter flew`).
pub fn extract_attributes(
    tokens: &[Token],
    mentions: &[Mention],
    lex: &Lexicons,
) -> Vec<AttributeLink<EntityRef>> {
    let anchors = anchors(tokens, mentions);
    let mut linker = Linker {
        tokens,
        lex,
        taken: vec![false; tokens.len()],
        out: Vec::new(),
    };
    for a in &anchors {
        linker.copular(a);
    }
    for a in anchors.iter().filter(|a| a.mention.kind != MentionKind::Pronoun) {
        linker.prenominal(a);
    }
    for a in anchors.iter().filter(|a| a.mention.kind != MentionKind::Pronoun) {
        linker.appositive(a);
    }
    linker.subject_verb(&anchors);
    linker.out.sort_by_key(|l| l.source_span.start);
    linker.out
}

fn anchors<'m>(tokens: &[Token], mentions: &'m [Mention]) -> Vec<Anchor<'m>> {
    let mut out: Vec<Anchor<'m>> = mentions
        .iter()
        .filter_map(|m| {
            let first = tokens.iter().position(|t| m.span.contains(&t.span))?;
            let last = tokens.iter().rposition(|t| m.span.contains(&t.span))?;
            Some(Anchor { mention: m, first, last })
        })
        .collect();
    out.sort_by_key(|a| a.first);
    out
}

struct Linker<'a> {
    tokens: &'a [Token],
    lex: &'a Lexicons,
    taken: Vec<bool>,
    out: Vec<AttributeLink<EntityRef>>,
}

impl Linker<'_> {
    fn role(&self, i: usize) -> Option<Role> {
        self.lex.role(&self.tokens[i].text.to_lowercase())
    }

    fn pos(&self, i: usize) -> Pos {
        self.tokens[i].pos.unwrap_or(Pos::Other)
    }

    fn is_modifier(&self, i: usize) -> bool {
        matches!(self.role(i), Some(Role::Adverb | Role::Degree | Role::Negation))
            || (self.pos(i) == Pos::Other && self.tokens[i].text.to_lowercase().ends_with("ly"))
    }

    fn link(&mut self, i: usize, mention: &Mention) {
        if self.taken[i] || !mention.entity.is_resolved() {
            return;
        }
        let token = &self.tokens[i];
        let pos_class = self.pos(i);
        debug_assert!(matches!(pos_class, Pos::Adj | Pos::Verb));
        self.taken[i] = true;
        self.out.push(AttributeLink {
            word: token.text.to_lowercase(),
            pos_class,
            entity: mention.entity.clone(),
            sentence_index: token.sentence_index,
            source_span: token.span,
        });
    }

    /// Indices of a run of adjectives joined by commas or `and`/`or`,
    /// starting at `i`.
    fn adjective_run(&self, mut i: usize) -> Vec<usize> {
        let mut run = Vec::new();
        while i < self.tokens.len() && self.pos(i) == Pos::Adj {
            run.push(i);
            i += 1;
            let mut j = i;
            while j < self.tokens.len()
                && (self.tokens[j].text == "," || matches!(self.tokens[j].text.as_str(), "and" | "or"))
            {
                j += 1;
            }
            if j > i && j < self.tokens.len() && self.pos(j) == Pos::Adj {
                i = j;
            }
        }
        run
    }

    fn copular(&mut self, a: &Anchor<'_>) {
        let mut i = a.last + 1;
        if self.tokens.get(i).is_some_and(|t| is_possessive_clitic(&t.text)) {
            return;
        }
        while i < self.tokens.len() && (self.role(i) == Some(Role::Auxiliary) || self.is_modifier(i)) {
            i += 1;
        }
        if i >= self.tokens.len() || self.role(i) != Some(Role::Copula) {
            return;
        }
        i += 1;
        while i < self.tokens.len() && self.is_modifier(i) {
            i += 1;
        }
        for j in self.adjective_run(i) {
            self.link(j, a.mention);
        }
    }

    fn prenominal(&mut self, a: &Anchor<'_>) {
        let mut i = a.first;
        while i > 0 && self.pos(i - 1) == Pos::Adj {
            i -= 1;
            self.link(i, a.mention);
        }
    }

    fn appositive(&mut self, a: &Anchor<'_>) {
        let open = a.last + 1;
        if self.tokens.get(open).is_none_or(|t| t.text != ",") {
            return;
        }
        let Some(close) = (open + 1..self.tokens.len()).find(|&j| {
            let t = &self.tokens[j];
            t.text == "," && self.tokens.get(j + 1).is_none_or(|n| n.text != "and")
        }) else {
            return;
        };
        let inner = open + 1..close;
        if inner.is_empty() {
            return;
        }
        let fits = inner.clone().all(|j| {
            let t = &self.tokens[j];
            matches!(self.pos(j), Pos::Adj | Pos::Noun)
                || matches!(self.role(j), Some(Role::Determiner | Role::Degree))
                || matches!(t.text.as_str(), "," | "and" | "or")
        });
        if fits {
            let adjectives: Vec<usize> = inner.filter(|&j| self.pos(j) == Pos::Adj).collect();
            for j in adjectives {
                self.link(j, a.mention);
            }
        }
    }

    fn subject_verb(&mut self, anchors: &[Anchor<'_>]) {
        for v in 0..self.tokens.len() {
            if self.taken[v] || self.pos(v) != Pos::Verb || anchors.iter().any(|a| (a.first..=a.last).contains(&v)) {
                continue;
            }
            if self.blocked(v, anchors) {
                continue;
            }
            let subject = anchors
                .iter()
                .rev()
                .filter(|a| a.last < v)
                .find(|a| self.can_be_subject(a));
            if let Some(a) = subject {
                self.link(v, a.mention);
            }
        }
    }

    /// A noun or non-character pronoun right before the verb (ignoring
    /// auxiliaries and adverbs) is its subject.
    fn blocked(&self, v: usize, anchors: &[Anchor<'_>]) -> bool {
        let Some(p) = (0..v)
            .rev()
            .find(|&p| self.role(p) != Some(Role::Auxiliary) && !self.is_modifier(p))
        else {
            return false;
        };
        let in_mention = anchors.iter().any(|a| (a.first..=a.last).contains(&p));
        !in_mention && matches!(self.pos(p), Pos::Noun | Pos::Pronoun)
    }

    fn can_be_subject(&self, a: &Anchor<'_>) -> bool {
        if a.mention.kind == MentionKind::Pronoun {
            return SUBJECT_FORMS.contains(&a.mention.surface.to_lowercase().as_str());
        }
        if self.tokens.get(a.last + 1).is_some_and(|t| is_possessive_clitic(&t.text)) {
            return false;
        }
        let object = a.first > 0
            && (self.pos(a.first - 1) == Pos::Verb || self.role(a.first - 1) == Some(Role::Preposition));
        !object
    }
}

fn is_possessive_clitic(text: &str) -> bool {
    matches!(text, "'s" | "\u{2019}s" | "'" | "\u{2019}")
}
