use std::collections::BTreeSet;

use crate::lexicon::Gender;

use super::{pronoun_class, EntityRef, Mention, MentionKind, PronounClass, RegistryView};

/// Runs the coreference sieve over the mentions of a single paragraph.
///
/// 1. Names and aliases bind to a registry record, else to a provisional
///    entity keyed by surface.
/// 2. `he`/`she` forms bind to the closest preceding name whose entity
///    agrees in gender (unknown gender agrees with both).
/// 3. `they` forms bind only while exactly one entity has been named so far.
/// 4. Everything else stays unresolved.
///
/// Only names act as antecedents, and tombstoned characters never do.
pub fn resolve_paragraph(mut mentions: Vec<Mention>, view: &RegistryView<'_>) -> Vec<Mention> {
    mentions.sort_by_key(|m| (m.span.start, m.span.end));

    for m in mentions.iter_mut().filter(|m| m.kind != MentionKind::Pronoun) {
        m.entity = view.bind_name(&m.surface);
    }

    let mut resolved = Vec::with_capacity(mentions.len());
    for i in 0..mentions.len() {
        let mention = &mentions[i];
        if mention.kind != MentionKind::Pronoun {
            resolved.push(mention.entity.clone());
            continue;
        }
        let antecedents = mentions[..i]
            .iter()
            .filter(|m| m.kind != MentionKind::Pronoun && view.can_be_antecedent(&m.entity));
        let entity = match pronoun_class(&mention.surface) {
            Some(PronounClass::Feminine) => closest_agreeing(antecedents, view, Gender::Feminine),
            Some(PronounClass::Masculine) => closest_agreeing(antecedents, view, Gender::Masculine),
            Some(PronounClass::Plural) => {
                let distinct: BTreeSet<&EntityRef> = antecedents.map(|m| &m.entity).collect();
                if distinct.len() == 1 {
                    distinct.into_iter().next().cloned()
                } else {
                    None
                }
            }
            None => None,
        };
        resolved.push(entity.unwrap_or(EntityRef::Unresolved));
    }
    for (m, entity) in mentions.iter_mut().zip(resolved) {
        m.entity = entity;
    }
    mentions
}

fn closest_agreeing<'m>(
    antecedents: impl DoubleEndedIterator<Item = &'m Mention>,
    view: &RegistryView<'_>,
    wanted: Gender,
) -> Option<EntityRef> {
    antecedents
        .rev()
        .find(|m| view.mention_gender(m).is_none_or(|g| g == wanted))
        .map(|m| m.entity.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entities::detect_mentions;
    use crate::lexicon::Lexicons;
    use crate::registry::{Registry, GENDER_DIMENSION};
    use crate::text::segment;

    fn resolve(doc: &str, reg: &Registry) -> Vec<(String, EntityRef)> {
        let view = RegistryView::new(reg, Lexicons::bundled());
        let seg = segment(doc);
        let mentions = detect_mentions(doc, &seg.tokens, &view);
        resolve_paragraph(mentions, &view)
            .into_iter()
            .map(|m| (m.surface, m.entity))
            .collect()
    }

    fn prov(s: &str) -> EntityRef {
        EntityRef::Provisional(s.to_string())
    }

    #[test]
    fn single_antecedent() {
        let out = resolve("Wendy smiled. Then she left.", &Registry::default());
        assert_eq!(out[1], ("she".to_string(), prov("wendy")));
    }

    #[test]
    fn gender_mismatch_stays_unresolved() {
        let out = resolve("Peter smiled. Then she left.", &Registry::default());
        assert_eq!(out[1].1, EntityRef::Unresolved);
    }

    #[test]
    fn closest_agreeing_antecedent_wins() {
        let out = resolve("Wendy met Peter and John. She smiled at him.", &Registry::default());
        assert_eq!(out[3].1, prov("wendy"));
        assert_eq!(out[4].1, prov("john"));
    }

    #[test]
    fn unknown_gender_agrees_with_anything() {
        let out = resolve("Zorblax waited. He was tired.", &Registry::default());
        assert_eq!(out[1].1, prov("zorblax"));
    }

    #[test]
    fn assigned_demographics_override_the_lexicon() {
        let mut reg = Registry::default();
        let doc = "Peter waited. Then she left.";
        let id = reg.add_manual(doc, "Peter", crate::text::Span::new(0, 5)).unwrap();
        reg.assign(id, GENDER_DIMENSION, Some("Female")).unwrap();
        let out = resolve(doc, &reg);
        assert_eq!(out[1].1, EntityRef::Entity(id));
    }

    #[test]
    fn they_needs_exactly_one_entity() {
        let out = resolve("Sam arrived. They sat.", &Registry::default());
        assert_eq!(out[1].1, prov("sam"));
        let out = resolve("Sam met Alex. They sat.", &Registry::default());
        assert_eq!(out[2].1, EntityRef::Unresolved);
    }

    #[test]
    fn cataphora_is_unresolved() {
        let out = resolve("When she arrived, Wendy sat.", &Registry::default());
        assert_eq!(out[0].1, EntityRef::Unresolved);
    }

    #[test]
    fn pronouns_stay_with_deleted_characters() {
        let doc = "Wendy met Tom. He ran.";
        let mut reg = Registry::default();
        let tom = reg.add_manual(doc, "Tom", crate::text::Span::new(10, 13)).unwrap();
        reg.delete(tom).unwrap();
        let out = resolve(doc, &reg);
        let he = out.iter().find(|(s, _)| s == "He").unwrap();
        assert_eq!(he.1, EntityRef::Entity(tom));
    }
}
