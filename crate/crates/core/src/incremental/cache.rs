use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::registry::{Registry, RegistryChange};
use crate::text::{Segmenter, Span};

use super::ParagraphAnalysis;

#[derive(Debug, Clone)]
struct Entry {
    text: String,
    analysis: Arc<ParagraphAnalysis>,
    /// Case-folded word tokens.
    words: HashSet<String>,
}

/// Content-addressed store of paragraph analyses, all valid at one
/// registry version.
///
/// Identical paragraphs share an entry. A token index (case-folded token
/// to entry hashes) finds the entries a registry change can affect.
#[derive(Debug, Clone, Default)]
pub struct ParagraphCache {
    entries: HashMap<u64, Entry>,
    index: HashMap<String, HashSet<u64>>,
    valid_at: u64,
}

impl ParagraphCache {
    pub fn new() -> Self {
        ParagraphCache::default()
    }

    /// Registry version every entry is valid at.
    pub fn valid_at(&self) -> u64 {
        self.valid_at
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, hash: u64) -> bool {
        self.entries.contains_key(&hash)
    }

    /// The cached analysis of `text`, if present. The text is compared so a
    /// hash collision is a miss, never a wrong answer.
    pub fn get(&self, hash: u64, text: &str) -> Option<&Arc<ParagraphAnalysis>> {
        self.entries
            .get(&hash)
            .filter(|e| e.text == text)
            .map(|e| &e.analysis)
    }

    pub fn insert(&mut self, text: &str, analysis: ParagraphAnalysis) {
        let hash = analysis.content_hash;
        self.remove(hash);
        let words: HashSet<String> = analysis
            .tokens
            .iter()
            .map(|t| t.text.to_lowercase())
            .collect();
        for w in &words {
            self.index.entry(w.clone()).or_default().insert(hash);
        }
        self.entries.insert(
            hash,
            Entry {
                text: text.to_string(),
                analysis: Arc::new(analysis),
                words,
            },
        );
    }

    pub fn remove(&mut self, hash: u64) -> bool {
        let Some(entry) = self.entries.remove(&hash) else {
            return false;
        };
        for w in &entry.words {
            if let Some(set) = self.index.get_mut(w) {
                set.remove(&hash);
                if set.is_empty() {
                    self.index.remove(w);
                }
            }
        }
        true
    }

    /// Drops every entry whose hash is not in `keep`.
    pub fn retain(&mut self, keep: &HashSet<u64>) {
        let stale: Vec<u64> = self
            .entries
            .keys()
            .filter(|h| !keep.contains(h))
            .copied()
            .collect();
        for h in stale {
            self.remove(h);
        }
    }

    pub fn clear(&mut self) {
        self.entries.clear();
        self.index.clear();
    }

    /// Brings the cache up to `registry.version()`, evicting every entry
    /// whose resolution could differ under the new registry state. Returns
    /// the number of evictions.
    pub fn invalidate(&mut self, registry: &Registry) -> usize {
        let target = registry.version();
        if target == self.valid_at {
            return 0;
        }
        let before = self.entries.len();
        match registry.changes_since(self.valid_at) {
            Some(changes) if self.valid_at < target => {
                for change in changes {
                    match change {
                        RegistryChange::Aliases(aliases) => {
                            for alias in aliases {
                                self.evict_containing(alias);
                            }
                        }
                        RegistryChange::Promoted(name) => self.evict_new_matches(name),
                        RegistryChange::Cosmetic => {}
                    }
                }
            }
            _ => self.clear(),
        }
        self.valid_at = target;
        before - self.entries.len()
    }

    /// Entries whose token set covers every token of `alias`, case-folded.
    pub fn entries_containing(&self, alias: &str) -> Vec<u64> {
        let lowered: Vec<String> = alias_tokens(alias).iter().map(|t| t.to_lowercase()).collect();
        if lowered.is_empty() {
            return Vec::new();
        }
        let mut hits: Vec<u64> = self
            .index
            .get(&lowered[0])
            .into_iter()
            .flatten()
            .copied()
            .filter(|h| lowered.iter().all(|t| self.entries[h].words.contains(t)))
            .collect();
        hits.sort_unstable();
        hits
    }

    fn evict_containing(&mut self, alias: &str) {
        for h in self.entries_containing(alias) {
            self.remove(h);
        }
    }

    /// A newly registered name only changes paragraphs where its exact
    /// token sequence occurs outside every existing mention: everywhere
    /// else the occurrence was already bound by that name.
    fn evict_new_matches(&mut self, name: &str) {
        let tokens = alias_tokens(name);
        if tokens.is_empty() {
            return;
        }
        let stale: Vec<u64> = self
            .entries_containing(name)
            .into_iter()
            .filter(|h| has_unbound_occurrence(&self.entries[h].analysis, &tokens))
            .collect();
        for h in stale {
            self.remove(h);
        }
    }
}

fn alias_tokens(alias: &str) -> Vec<String> {
    Segmenter::shared()
        .segment(alias)
        .tokens
        .into_iter()
        .map(|t| t.text)
        .collect()
}

fn has_unbound_occurrence(analysis: &ParagraphAnalysis, name: &[String]) -> bool {
    let tokens = &analysis.tokens;
    (0..tokens.len().saturating_sub(name.len() - 1)).any(|i| {
        let window = &tokens[i..i + name.len()];
        let same_sentence = window.iter().all(|t| t.sentence_index == window[0].sentence_index);
        if !same_sentence || !window.iter().zip(name).all(|(t, n)| t.text == *n) {
            return false;
        }
        let span = Span::new(window[0].span.start, window[name.len() - 1].span.end);
        !analysis.mentions.iter().any(|m| m.span.contains(&span))
    })
}
