//! Curated characters and the identity schema they are described with.
//!
//! The registry is the user's authority over what the pipeline found:
//! merges, deletions, manually tracked names and demographic assignments
//! all live here. Every mutation bumps [`Registry::version`] and appends a
//! [`RegistryChange`] so cached paragraph analyses can be invalidated
//! precisely.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lexicon::{Gender, Lexicons};
use crate::text::{slice_chars, Span};

/// Dimension consulted for pronoun agreement.
pub const GENDER_DIMENSION: &str = "Gender";

/// Categories starting with this prefix are accepted under any dimension
/// and added to the schema on first use.
pub const SELF_DESCRIBED_PREFIX: &str = "Self-described:";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityId(pub u64);

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for EntityId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse().map(EntityId)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub id: EntityId,
    pub canonical_name: String,
    pub aliases: BTreeSet<String>,
    #[serde(default)]
    pub demographics: BTreeMap<String, String>,
    #[serde(default)]
    pub manually_added: bool,
    #[serde(default)]
    pub deleted: bool,
    /// Set on the source record of a merge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub merged_into: Option<EntityId>,
}

impl CharacterRecord {
    pub fn is_live(&self) -> bool {
        !self.deleted
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimension {
    pub name: String,
    pub categories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySchema {
    pub dimensions: Vec<Dimension>,
}

impl Default for IdentitySchema {
    fn default() -> Self {
        let dim = |name: &str, cats: &[&str]| Dimension {
            name: name.to_string(),
            categories: cats.iter().map(|c| c.to_string()).collect(),
        };
        IdentitySchema {
            dimensions: vec![
                dim(GENDER_DIMENSION, &["Female", "Male", "Non-binary"]),
                dim(
                    "Race/Ethnicity",
                    &[
                        "Asian",
                        "Black",
                        "Hispanic or Latino",
                        "Indigenous",
                        "Middle Eastern or North African",
                        "Pacific Islander",
                        "White",
                        "Multiracial",
                    ],
                ),
                dim(
                    "Age group",
                    &["Child", "Teen", "Young adult", "Adult", "Older adult"],
                ),
            ],
        }
    }
}

impl IdentitySchema {
    pub fn dimension(&self, name: &str) -> Option<&Dimension> {
        self.dimensions.iter().find(|d| d.name == name)
    }

    pub fn contains(&self, dimension: &str, category: &str) -> bool {
        self.dimension(dimension)
            .is_some_and(|d| d.categories.iter().any(|c| c == category))
    }

    /// Adds the dimension and category when absent. Returns whether anything
    /// changed.
    pub fn extend(&mut self, dimension: &str, category: Option<&str>) -> Result<bool, RegistryError> {
        let dimension = clean_name(dimension)?;
        let category = category.map(clean_name).transpose()?;
        let mut changed = false;
        let idx = match self.dimensions.iter().position(|d| d.name == dimension) {
            Some(i) => i,
            None => {
                self.dimensions.push(Dimension {
                    name: dimension,
                    categories: Vec::new(),
                });
                changed = true;
                self.dimensions.len() - 1
            }
        };
        if let Some(category) = category {
            let cats = &mut self.dimensions[idx].categories;
            if !cats.contains(&category) {
                cats.push(category);
                changed = true;
            }
        }
        Ok(changed)
    }
}

fn clean_name(name: &str) -> Result<String, RegistryError> {
    let trimmed = name.trim();
    if trimmed.is_empty() {
        Err(RegistryError::InvalidName)
    } else {
        Ok(trimmed.to_string())
    }
}

/// Conjunction of identity selections, at most one per dimension.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupKey {
    pub selections: BTreeMap<String, String>,
}

impl GroupKey {
    pub fn new<I, D, C>(pairs: I) -> Result<GroupKey, RegistryError>
    where
        I: IntoIterator<Item = (D, C)>,
        D: Into<String>,
        C: Into<String>,
    {
        let mut selections = BTreeMap::new();
        for (d, c) in pairs {
            let d = d.into();
            if selections.insert(d.clone(), c.into()).is_some() {
                return Err(RegistryError::InvalidGroup(format!(
                    "dimension {d:?} selected twice"
                )));
            }
        }
        if selections.is_empty() {
            return Err(RegistryError::InvalidGroup("empty group".into()));
        }
        Ok(GroupKey { selections })
    }

    pub fn single(dimension: &str, category: &str) -> GroupKey {
        GroupKey {
            selections: BTreeMap::from([(dimension.to_string(), category.to_string())]),
        }
    }

    pub fn matches(&self, record: &CharacterRecord) -> bool {
        self.selections
            .iter()
            .all(|(d, c)| record.demographics.get(d) == Some(c))
    }

    pub fn validate(&self, schema: &IdentitySchema) -> Result<(), RegistryError> {
        if self.selections.is_empty() {
            return Err(RegistryError::InvalidGroup("empty group".into()));
        }
        for (d, c) in &self.selections {
            let dim = schema
                .dimension(d)
                .ok_or_else(|| RegistryError::UnknownDimension(d.clone()))?;
            if !dim.categories.contains(c) {
                return Err(RegistryError::UnknownCategory {
                    dimension: d.clone(),
                    category: c.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

/// `Gender:Female+Race/Ethnicity:White`
impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .selections
            .iter()
            .map(|(d, c)| format!("{d}:{c}"))
            .collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for GroupKey {
    type Err = RegistryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let pairs = s
            .split('+')
            .map(|part| {
                part.split_once(':')
                    .map(|(d, c)| (d.trim().to_string(), c.trim().to_string()))
                    .filter(|(d, c)| !d.is_empty() && !c.is_empty())
                    .ok_or_else(|| RegistryError::InvalidGroup(format!("bad selection {part:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroupKey::new(pairs)
    }
}

/// What a registry mutation can do to mention resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegistryChange {
    /// Resolution may differ in any paragraph containing one of these aliases.
    Aliases(Vec<String>),
    /// A provisional entity became a record. Only paragraphs where the alias
    /// now produces a new exact match need re-analysis.
    Promoted(String),
    /// Nothing resolution depends on (schema, non-gender demographics).
    Cosmetic,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RegistryError {
    #[error("unknown entity {0}")]
    UnknownEntity(EntityId),
    #[error("cannot merge an entity into itself")]
    SelfMerge,
    #[error("alias {0:?} already belongs to a live character")]
    DuplicateAlias(String),
    #[error("span text {found:?} does not match {expected:?}")]
    SpanMismatch { expected: String, found: String },
    #[error("unknown dimension {0:?}")]
    UnknownDimension(String),
    #[error("unknown category {category:?} in dimension {dimension:?}")]
    UnknownCategory { dimension: String, category: String },
    #[error("names must be non-empty")]
    InvalidName,
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("entity {0} was merged and cannot be restored")]
    MergedEntity(EntityId),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Registry {
    pub schema: IdentitySchema,
    records: BTreeMap<EntityId, CharacterRecord>,
    next_id: u64,
    version: u64,
    #[serde(skip)]
    changes: Vec<(u64, RegistryChange)>,
}

/// Equality ignores the in-memory change log, which is not persisted.
impl PartialEq for Registry {
    fn eq(&self, other: &Self) -> bool {
        self.schema == other.schema
            && self.records == other.records
            && self.next_id == other.next_id
            && self.version == other.version
    }
}

impl Eq for Registry {}

impl Default for Registry {
    fn default() -> Self {
        Registry::new(IdentitySchema::default())
    }
}

impl Registry {
    pub fn new(schema: IdentitySchema) -> Registry {
        Registry {
            schema,
            records: BTreeMap::new(),
            next_id: 1,
            version: 0,
            changes: Vec::new(),
        }
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn get(&self, id: EntityId) -> Option<&CharacterRecord> {
        self.records.get(&id)
    }

    pub fn records(&self) -> impl Iterator<Item = &CharacterRecord> {
        self.records.values()
    }

    pub fn live(&self) -> impl Iterator<Item = &CharacterRecord> {
        self.records.values().filter(|r| r.is_live())
    }

    /// Follows merge links to the record that now owns `id`'s mentions.
    pub fn resolve(&self, id: EntityId) -> Option<EntityId> {
        let mut current = id;
        for _ in 0..=self.records.len() {
            match self.records.get(&current)?.merged_into {
                Some(next) => current = next,
                None => return Some(current),
            }
        }
        None
    }

    /// Case-insensitive alias lookup. Live records win over tombstones, so
    /// a deleted character's names keep binding to it (and stay suppressed).
    pub fn lookup(&self, surface: &str) -> Option<EntityId> {
        let key = surface.to_lowercase();
        let mut deleted = None;
        for record in self.records.values() {
            if record.aliases.iter().any(|a| a.to_lowercase() == key) {
                if record.is_live() {
                    return Some(record.id);
                }
                if record.merged_into.is_none() && deleted.is_none() {
                    deleted = Some(record.id);
                }
            }
        }
        deleted
    }

    /// Pronoun agreement class: assigned demographics first, then the first
    /// name lexicon. `None` means compatible with any pronoun.
    pub fn pronoun_gender(&self, id: EntityId, lexicons: &Lexicons) -> Option<Gender> {
        let record = self.records.get(&id)?;
        match record.demographics.get(GENDER_DIMENSION) {
            Some(category) => gender_of_category(category),
            None => name_gender(&record.canonical_name, lexicons),
        }
    }

    /// Changes recorded after `since`, oldest first. `None` when the log no
    /// longer reaches back that far (e.g. after a reload).
    pub fn changes_since(&self, since: u64) -> Option<Vec<&RegistryChange>> {
        if since == self.version {
            return Some(Vec::new());
        }
        let first = self.changes.first()?.0;
        if first > since + 1 {
            return None;
        }
        Some(
            self.changes
                .iter()
                .filter(|(v, _)| *v > since)
                .map(|(_, c)| c)
                .collect(),
        )
    }

    fn record(&mut self, change: RegistryChange) {
        self.version += 1;
        self.changes.push((self.version, change));
    }

    fn live_record(&self, id: EntityId) -> Result<&CharacterRecord, RegistryError> {
        self.records
            .get(&id)
            .filter(|r| r.is_live())
            .ok_or(RegistryError::UnknownEntity(id))
    }

    fn alias_taken(&self, alias: &str, except: Option<EntityId>) -> bool {
        let key = alias.to_lowercase();
        self.live()
            .filter(|r| Some(r.id) != except)
            .any(|r| r.aliases.iter().any(|a| a.to_lowercase() == key))
    }

    fn insert_record(&mut self, name: &str, manually_added: bool) -> EntityId {
        let id = EntityId(self.next_id);
        self.next_id += 1;
        self.records.insert(
            id,
            CharacterRecord {
                id,
                canonical_name: name.to_string(),
                aliases: BTreeSet::from([name.to_string()]),
                demographics: BTreeMap::new(),
                manually_added,
                deleted: false,
                merged_into: None,
            },
        );
        id
    }

    /// Promotes a provisional entity discovered by the pipeline.
    pub(crate) fn promote(&mut self, surface: &str) -> Result<EntityId, RegistryError> {
        let name = clean_name(surface)?;
        if self.lookup(&name).is_some() {
            return Err(RegistryError::DuplicateAlias(name));
        }
        let id = self.insert_record(&name, false);
        self.record(RegistryChange::Promoted(name));
        Ok(id)
    }

    /// Starts tracking a name the pipeline missed. `span` must select
    /// `surface` in `document`.
    pub fn add_manual(
        &mut self,
        document: &str,
        surface: &str,
        span: Span,
    ) -> Result<EntityId, RegistryError> {
        let found = if span.end <= crate::text::char_len(document) && span.start < span.end {
            slice_chars(document, span)
        } else {
            ""
        };
        if found != surface {
            return Err(RegistryError::SpanMismatch {
                expected: surface.to_string(),
                found: found.to_string(),
            });
        }
        let name = clean_name(surface)?;
        if name != surface {
            return Err(RegistryError::InvalidName);
        }
        if self.alias_taken(&name, None) {
            return Err(RegistryError::DuplicateAlias(name));
        }
        let id = self.insert_record(&name, true);
        self.record(RegistryChange::Aliases(vec![name]));
        Ok(id)
    }

    pub fn add_alias(&mut self, id: EntityId, alias: &str) -> Result<(), RegistryError> {
        self.live_record(id)?;
        let alias = clean_name(alias)?;
        if self.alias_taken(&alias, None) {
            return Err(RegistryError::DuplicateAlias(alias));
        }
        self.records
            .get_mut(&id)
            .expect("checked live")
            .aliases
            .insert(alias.clone());
        self.record(RegistryChange::Aliases(vec![alias]));
        Ok(())
    }

    /// Folds `source` into `target`. Target demographics win; gaps are
    /// filled from the source.
    pub fn merge(&mut self, target: EntityId, source: EntityId) -> Result<(), RegistryError> {
        if target == source {
            return Err(RegistryError::SelfMerge);
        }
        self.live_record(target)?;
        let source_record = self.live_record(source)?.clone();
        let target_record = self.records.get_mut(&target).expect("checked live");
        target_record
            .aliases
            .extend(source_record.aliases.iter().cloned());
        for (dim, cat) in &source_record.demographics {
            target_record
                .demographics
                .entry(dim.clone())
                .or_insert_with(|| cat.clone());
        }
        let affected: Vec<String> = target_record.aliases.iter().cloned().collect();
        let src = self.records.get_mut(&source).expect("checked live");
        src.deleted = true;
        src.merged_into = Some(target);
        self.record(RegistryChange::Aliases(affected));
        Ok(())
    }

    /// Tombstones a character; its names stay bound to it so they are not
    /// rediscovered.
    pub fn delete(&mut self, id: EntityId) -> Result<(), RegistryError> {
        let record = self.live_record(id)?;
        let affected = record.aliases.iter().cloned().collect();
        self.records.get_mut(&id).expect("checked live").deleted = true;
        self.record(RegistryChange::Aliases(affected));
        Ok(())
    }

    pub fn restore(&mut self, id: EntityId) -> Result<(), RegistryError> {
        let record = self
            .records
            .get(&id)
            .ok_or(RegistryError::UnknownEntity(id))?;
        if record.merged_into.is_some() {
            return Err(RegistryError::MergedEntity(id));
        }
        if record.is_live() {
            return Ok(());
        }
        if let Some(taken) = record.aliases.iter().find(|a| self.alias_taken(a, Some(id))) {
            return Err(RegistryError::DuplicateAlias(taken.clone()));
        }
        let affected = record.aliases.iter().cloned().collect();
        self.records.get_mut(&id).expect("exists").deleted = false;
        self.record(RegistryChange::Aliases(affected));
        Ok(())
    }

    pub fn extend_schema(
        &mut self,
        dimension: &str,
        category: Option<&str>,
    ) -> Result<(), RegistryError> {
        if self.schema.extend(dimension, category)? {
            self.record(RegistryChange::Cosmetic);
        }
        Ok(())
    }

    /// Sets (or with `None`, clears) a character's category in one dimension.
    pub fn assign(
        &mut self,
        id: EntityId,
        dimension: &str,
        category: Option<&str>,
    ) -> Result<(), RegistryError> {
        self.live_record(id)?;
        if self.schema.dimension(dimension).is_none() {
            return Err(RegistryError::UnknownDimension(dimension.to_string()));
        }
        if let Some(cat) = category {
            if cat.starts_with(SELF_DESCRIBED_PREFIX) {
                self.schema.extend(dimension, Some(cat))?;
            } else if !self.schema.contains(dimension, cat) {
                return Err(RegistryError::UnknownCategory {
                    dimension: dimension.to_string(),
                    category: cat.to_string(),
                });
            }
        }
        let record = self.records.get_mut(&id).expect("checked live");
        let before = record.demographics.get(dimension).cloned();
        match category {
            Some(cat) => record.demographics.insert(dimension.to_string(), cat.to_string()),
            None => record.demographics.remove(dimension),
        };
        if before.as_deref() == category {
            return Ok(());
        }
        let change = if dimension == GENDER_DIMENSION {
            RegistryChange::Aliases(record.aliases.iter().cloned().collect())
        } else {
            RegistryChange::Cosmetic
        };
        self.record(change);
        Ok(())
    }

    /// Live characters matching every selection of `key`.
    pub fn group_members(&self, key: &GroupKey) -> Result<Vec<EntityId>, RegistryError> {
        key.validate(&self.schema)?;
        Ok(self.live().filter(|r| key.matches(r)).map(|r| r.id).collect())
    }
}

/// Maps a Gender category onto pronoun agreement.
pub fn gender_of_category(category: &str) -> Option<Gender> {
    match category.trim().to_lowercase().as_str() {
        "female" | "woman" | "girl" => Some(Gender::Feminine),
        "male" | "man" | "boy" => Some(Gender::Masculine),
        _ => None,
    }
}

/// Gender suggested by a name: the first non-title word's lexicon entry,
/// falling back to a gendered title ("Queen", "Mr.").
pub fn name_gender(name: &str, lexicons: &Lexicons) -> Option<Gender> {
    let mut title = None;
    for word in name.split_whitespace() {
        if lexicons.is_honorific(word) {
            title = title.or(lexicons.gender_of(word));
            continue;
        }
        return lexicons.gender_of(word).or(title);
    }
    title
}
