use crate::lexicon::{Lexicons, Role, SuffixClass};
use crate::text::{Pos, Token};

const POSSESSIVES: &[&str] = &["his", "her", "its", "their", "my", "your", "our"];
const SUBJECT_PRONOUNS: &[&str] = &["i", "we", "you", "he", "she", "they", "it"];

/// Assigns a coarse part-of-speech class to every token in place.
///
/// Lookup order: punctuation, closed-class words, capitalization, the word
/// lexicon (with a few context rules for words that carry more than one
/// reading), suffix rules, and finally `OTHER`. Tokens that already carry
/// a tag (names, gold overrides) keep it.
pub fn tag_pos(tokens: &mut [Token], lex: &Lexicons) {
    let mut start = 0;
    while start < tokens.len() {
        let sentence = tokens[start].sentence_index;
        let end = start
            + tokens[start..]
                .iter()
                .take_while(|t| t.sentence_index == sentence)
                .count();
        tag_sentence(&mut tokens[start..end], lex);
        start = end;
    }
}

struct Reading {
    lower: String,
    classes: Vec<Pos>,
    role: Option<Role>,
    /// -ed / -ing verb form whose class depends on its neighbours.
    participle: bool,
}

fn read(token: &Token, lex: &Lexicons) -> Reading {
    let lower = token.text.to_lowercase();
    if let Some(&(pos, role)) = lex.closed.get(&lower) {
        return Reading {
            lower,
            classes: vec![pos],
            role: Some(role),
            participle: false,
        };
    }
    let mut participle = false;
    let classes = match lex.pos.get(&lower) {
        Some(classes) => {
            participle = (lower.ends_with("ed") || lower.ends_with("ing"))
                && classes.first() == Some(&Pos::Verb);
            classes.clone()
        }
        None => match lex.suffixes.iter().find(|(s, _)| lower.ends_with(s.as_str())) {
            Some((_, SuffixClass::Fixed(pos))) => vec![*pos],
            Some((_, SuffixClass::Ambiguous)) => {
                participle = true;
                vec![Pos::Verb, Pos::Adj]
            }
            None => Vec::new(),
        },
    };
    Reading {
        lower,
        classes,
        role: None,
        participle,
    }
}

fn tag_sentence(tokens: &mut [Token], lex: &Lexicons) {
    let readings: Vec<Reading> = tokens.iter().map(|t| read(t, lex)).collect();
    let mut tags: Vec<Pos> = Vec::with_capacity(tokens.len());
    for i in 0..tokens.len() {
        let tag = tokens[i]
            .pos
            .unwrap_or_else(|| choose(tokens, &readings, &tags, i, lex));
        tags.push(tag);
    }
    for (token, tag) in tokens.iter_mut().zip(tags) {
        token.pos = Some(tag);
    }
}

fn choose(tokens: &[Token], readings: &[Reading], tags: &[Pos], i: usize, lex: &Lexicons) -> Pos {
    let token = &tokens[i];
    let r = &readings[i];
    if !token.is_word() {
        return Pos::Other;
    }
    if r.role.is_some() {
        return r.classes[0];
    }
    if token.is_capitalized() {
        let initial = tokens[..i].iter().all(|t| !t.is_word())
            || matches!(tokens[i - 1].text.as_str(), "\u{201c}" | "\u{2018}" | "\"" | "'" | ":");
        let known = !r.classes.is_empty();
        if !initial || !known || lex.gender_of(&r.lower).is_some() || lex.is_honorific(&r.lower) {
            return Pos::Proper;
        }
    }
    if r.classes.is_empty() {
        return Pos::Other;
    }

    let prev = i.checked_sub(1).filter(|&p| tokens[p].is_word());
    let prev_role = prev.and_then(|p| readings[p].role);
    let prev_lower = prev.map(|p| readings[p].lower.as_str());
    // Nearest preceding word that is not an adverb, negation or degree word.
    let governor = (0..i).rev().find(|&p| {
        tokens[p].is_word()
            && !matches!(readings[p].role, Some(Role::Adverb | Role::Negation | Role::Degree))
            && !(readings[p].role.is_none() && readings[p].lower.ends_with("ly"))
    });
    let governor_role = governor.and_then(|g| readings[g].role);
    let has = |p: Pos| r.classes.contains(&p);

    if has(Pos::Adj) && (governor_role == Some(Role::Copula) || prev_role == Some(Role::Degree)) {
        return Pos::Adj;
    }
    // Coordinated with an adjective ("kind and patient"), or opening an
    // aside after a comma ("Dolly, tired, ...").
    let after_comma = i > 0 && tokens[i - 1].text == ",";
    let coordinated = i >= 2
        && (after_comma || prev_role == Some(Role::Conjunction))
        && tags[i - 2] == Pos::Adj;
    if has(Pos::Adj) && (coordinated || (after_comma && r.participle)) {
        return Pos::Adj;
    }
    let modifier_slot = prev_role == Some(Role::Determiner)
        || prev_lower.is_some_and(|w| POSSESSIVES.contains(&w))
        || prev.is_some_and(|p| tags[p] == Pos::Adj);
    if r.participle {
        if matches!(governor_role, Some(Role::Auxiliary | Role::Copula)) {
            return Pos::Verb;
        }
        let next_is_noun = tokens
            .get(i + 1)
            .is_some_and(|t| t.is_word() && readings[i + 1].role.is_none() && readings[i + 1].classes.first() == Some(&Pos::Noun));
        if modifier_slot && next_is_noun {
            return Pos::Adj;
        }
        return r.classes[0];
    }
    if has(Pos::Noun) && has(Pos::Verb) {
        if modifier_slot {
            return Pos::Noun;
        }
        let subject = prev.is_some_and(|p| {
            tags[p] == Pos::Proper || SUBJECT_PRONOUNS.contains(&readings[p].lower.as_str())
        });
        if prev_lower == Some("to") || subject || governor_role == Some(Role::Auxiliary) {
            return Pos::Verb;
        }
    }
    r.classes[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::segment;

    fn tags(text: &str) -> Vec<(String, Pos)> {
        let mut tokens = segment(text).tokens;
        tag_pos(&mut tokens, Lexicons::bundled());
        tokens.into_iter().map(|t| (t.text, t.pos.unwrap())).collect()
    }

    fn tag_of(text: &str, word: &str) -> Pos {
        tags(text).into_iter().find(|(t, _)| t == word).unwrap().1
    }

    #[test]
    fn lexicon_and_suffix_rules() {
        assert_eq!(tag_of("It moved quickly.", "quickly"), Pos::Other);
        assert_eq!(tag_of("A beautiful day.", "beautiful"), Pos::Adj);
        assert_eq!(tag_of("The glorptious day.", "glorptious"), Pos::Adj);
        assert_eq!(tag_of("She blorfed.", "blorfed"), Pos::Verb);
    }

    #[test]
    fn every_token_gets_a_tag() {
        let mut tokens = segment("Wendy, who was kind, laughed \u{2014} twice! One.").tokens;
        tag_pos(&mut tokens, Lexicons::bundled());
        assert!(tokens.iter().all(|t| t.pos.is_some()));
    }

    #[test]
    fn copula_selects_adjective_reading() {
        assert_eq!(tag_of("Wendy was kind.", "kind"), Pos::Adj);
        assert_eq!(tag_of("What kind of day.", "kind"), Pos::Noun);
        assert_eq!(tag_of("She was very tired.", "tired"), Pos::Adj);
    }

    #[test]
    fn participles_follow_neighbours() {
        assert_eq!(tag_of("He had walked home.", "walked"), Pos::Verb);
        assert_eq!(tag_of("The smiling girl sat.", "smiling"), Pos::Adj);
        assert_eq!(tag_of("She loved flowers.", "loved"), Pos::Verb);
    }

    #[test]
    fn capitalization() {
        assert_eq!(tag_of("Then Peter flew.", "Peter"), Pos::Proper);
        assert_eq!(tag_of("Peter flew.", "Peter"), Pos::Proper);
        assert_eq!(tag_of("Brave Peter flew.", "Brave"), Pos::Adj);
        assert_eq!(tag_of("Zorblax waited.", "Zorblax"), Pos::Proper);
        assert_eq!(tag_of("She smiles.", "She"), Pos::Pronoun);
    }

    #[test]
    fn noun_verb_ambiguity() {
        assert_eq!(tag_of("She gave a smile.", "smile"), Pos::Noun);
        assert_eq!(tag_of("They smile.", "smile"), Pos::Verb);
    }
}
