//! Batch reports: one snapshot plus every analytics view, as JSON or CSV.

use serde::Serialize;
use storyscope::analytics::{
    candidate_pairs, impact_graph, timeline, word_zone, AnalyticsError, CandidatePair, EmbeddingTable,
    ImpactGraph, PosFilter, Subject, Timeline, TimelineMode, WordZone, MIN_EMBEDDED_WORDS,
};
use storyscope::incremental::AnalysisSnapshot;
use storyscope::registry::Registry;

use crate::project::Settings;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CandidatesSection {
    Ranked { pairs: Vec<CandidatePair> },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub report_version: u32,
    pub snapshot: AnalysisSnapshot,
    pub registry: Registry,
    pub timeline: Timeline,
    /// One graph per live mentioned character, in id order.
    pub impact: Vec<ImpactGraph>,
    pub word_zones: Vec<WordZone>,
    pub candidates: CandidatesSection,
}

impl Report {
    pub fn build(
        snapshot: &AnalysisSnapshot,
        registry: &Registry,
        settings: &Settings,
        embeddings: Option<&EmbeddingTable>,
    ) -> Result<Report, AnalyticsError> {
        let timeline = timeline(
            snapshot,
            registry,
            &TimelineMode::Characters,
            settings.sort_order,
            settings.aggregate_mode,
        )?;
        let subjects: Vec<Subject> = snapshot
            .entity_mentions
            .keys()
            .filter(|id| registry.get(**id).is_some_and(|r| r.is_live()))
            .map(|&id| Subject::Entity(id))
            .collect();
        let impact = subjects
            .iter()
            .map(|s| impact_graph(snapshot, registry, s, settings.min_edge_count))
            .collect::<Result<_, _>>()?;
        let word_zones = if subjects.is_empty() {
            Vec::new()
        } else {
            word_zone(snapshot, registry, &subjects, PosFilter::Both, settings.word_zone_k)?
        };
        let candidates = match embeddings {
            None => CandidatesSection::Skipped {
                reason: "no embedding table was supplied".into(),
            },
            Some(table) => match candidate_pairs(
                snapshot,
                registry,
                table,
                &subjects,
                settings.top_n_pairs,
                MIN_EMBEDDED_WORDS,
            ) {
                Ok(pairs) => CandidatesSection::Ranked { pairs },
                Err(AnalyticsError::NoEligibleSubjects) => CandidatesSection::Skipped {
                    reason: AnalyticsError::NoEligibleSubjects.to_string(),
                },
                Err(e) => return Err(e),
            },
        };
        Ok(Report {
            report_version: REPORT_VERSION,
            snapshot: snapshot.clone(),
            registry: registry.clone(),
            timeline,
            impact,
            word_zones,
            candidates,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Attribute links as `word,pos,entity,sentence` rows.
pub fn links_csv(snapshot: &AnalysisSnapshot, registry: &Registry) -> Result<String, csv::Error> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["word", "pos", "entity", "sentence"])?;
    for link in &snapshot.attribute_links {
        let name = registry.get(link.entity).map_or("", |r| r.canonical_name.as_str());
        out.write_record([
            link.word.as_str(),
            link.pos_class.as_str(),
            name,
            &link.sentence_index.to_string(),
        ])?;
    }
    let bytes = out.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}
