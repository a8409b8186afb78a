use std::collections::{HashMap, HashSet};

use crate::lexicon::{Gender, Lexicons};
use crate::registry::{name_gender, EntityId, Registry, GENDER_DIMENSION};
use crate::registry::gender_of_category;
use crate::text::Segmenter;

use super::{EntityRef, Mention};

/// Read-only projection of a [`Registry`] shaped for the resolution sieve.
#[derive(Debug, Clone)]
pub struct RegistryView<'a> {
    pub lexicons: &'a Lexicons,
    lookup: HashMap<String, EntityId>,
    /// First alias token to (alias tokens, owner), longest alias first.
    exact: HashMap<String, Vec<(Vec<String>, EntityId)>>,
    /// `(assigned, gender)`; an assigned gender is never second-guessed.
    gender: HashMap<EntityId, (bool, Option<Gender>)>,
    live: HashSet<EntityId>,
}

impl<'a> RegistryView<'a> {
    pub fn empty(lexicons: &'a Lexicons) -> Self {
        RegistryView {
            lexicons,
            lookup: HashMap::new(),
            exact: HashMap::new(),
            gender: HashMap::new(),
            live: HashSet::new(),
        }
    }

    pub fn new(registry: &Registry, lexicons: &'a Lexicons) -> Self {
        let mut view = RegistryView::empty(lexicons);
        let bindable: Vec<_> = registry
            .live()
            .chain(
                registry
                    .records()
                    .filter(|r| !r.is_live() && r.merged_into.is_none()),
            )
            .collect();
        for record in &bindable {
            for alias in &record.aliases {
                view.lookup.entry(alias.to_lowercase()).or_insert(record.id);
            }
            if record.is_live() {
                view.live.insert(record.id);
            }
            let gender = match record.demographics.get(GENDER_DIMENSION) {
                Some(category) => (true, gender_of_category(category)),
                None => (false, name_gender(&record.canonical_name, lexicons)),
            };
            view.gender.insert(record.id, gender);
        }
        let segmenter = Segmenter::shared();
        for record in &bindable {
            for alias in &record.aliases {
                let owner = view.lookup[&alias.to_lowercase()];
                let tokens: Vec<String> = segmenter
                    .segment(alias)
                    .tokens
                    .into_iter()
                    .map(|t| t.text)
                    .collect();
                if let Some(first) = tokens.first().cloned() {
                    let entry = view.exact.entry(first).or_default();
                    if !entry.iter().any(|(t, _)| *t == tokens) {
                        entry.push((tokens, owner));
                    }
                }
            }
        }
        for candidates in view.exact.values_mut() {
            candidates.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        }
        view
    }

    /// Case-insensitive alias lookup; see [`Registry::lookup`].
    pub fn lookup(&self, surface: &str) -> Option<EntityId> {
        self.lookup.get(&surface.to_lowercase()).copied()
    }

    pub fn is_live(&self, id: EntityId) -> bool {
        self.live.contains(&id)
    }

    /// Candidate alias token sequences starting with `first`.
    pub(crate) fn aliases_starting_with(&self, first: &str) -> &[(Vec<String>, EntityId)] {
        self.exact.get(first).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Binds a name surface: registry record if any alias matches, otherwise
    /// a provisional entity keyed by the lowercase surface.
    pub fn bind_name(&self, surface: &str) -> EntityRef {
        match self.lookup(surface) {
            Some(id) => EntityRef::Entity(id),
            None => EntityRef::Provisional(surface.to_lowercase()),
        }
    }

    /// Whether a bound mention may serve as an antecedent. Deleted
    /// characters still do, so their pronouns stay with them and are hidden.
    pub(crate) fn can_be_antecedent(&self, entity: &EntityRef) -> bool {
        entity.is_resolved()
    }

    /// Pronoun agreement of a named mention's entity. `None` agrees with
    /// every pronoun.
    pub(crate) fn mention_gender(&self, mention: &Mention) -> Option<Gender> {
        let (assigned, gender) = match &mention.entity {
            EntityRef::Entity(id) => self.gender.get(id).copied().unwrap_or((false, None)),
            EntityRef::Provisional(_) => (false, name_gender(&mention.surface, self.lexicons)),
            EntityRef::Unresolved => return None,
        };
        if assigned {
            gender
        } else {
            gender.or(mention.title_gender)
        }
    }
}
