//! Character analytics for long-form fiction.
//!
//! A document is split into paragraphs that are analyzed independently:
//! person mentions are detected and resolved against a [`registry::Registry`],
//! descriptive words are linked to the characters they describe, and the
//! results feed the [`analytics`] views. The [`incremental::Orchestrator`]
//! reuses cached paragraph results across edits.

pub mod analytics;
pub mod attributes;
pub mod entities;
pub mod incremental;
pub mod lexicon;
pub mod registry;
pub mod text;
