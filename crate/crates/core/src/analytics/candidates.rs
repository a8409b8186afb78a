use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::incremental::AnalysisSnapshot;
use crate::registry::{EntityId, Registry};

use super::{AnalyticsError, EmbeddingTable, Subject};

/// Subjects with fewer embedded linked words are left out.
pub const MIN_EMBEDDED_WORDS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePair {
    pub a: Subject,
    pub a_label: String,
    pub b: Subject,
    pub b_label: String,
    /// `1 - cos` between the subjects' mean word vectors.
    pub distance: f64,
}

/// Ranks subject pairs by how far apart their descriptor/action vocabularies
/// sit in embedding space, most distant first.
///
/// Each subject's vector is the mean over every attribute link whose word
/// is in `table` (repeats count). Pairs within a result are ordered by
/// label so the output does not depend on the order of `subjects`.
pub fn candidate_pairs(
    snapshot: &AnalysisSnapshot,
    registry: &Registry,
    table: &EmbeddingTable,
    subjects: &[Subject],
    top_n: usize,
    min_words: usize,
) -> Result<Vec<CandidatePair>, AnalyticsError> {
    if top_n == 0 {
        return Err(AnalyticsError::InvalidArgument("top_n must be at least 1".into()));
    }
    let mut eligible: Vec<(String, Subject, Vec<f64>)> = Vec::new();
    let mut seen = HashSet::new();
    for subject in subjects {
        if !seen.insert(subject.clone()) {
            continue;
        }
        let members: HashSet<EntityId> = subject.members(registry)?.into_iter().collect();
        let mut sum = vec![0.0; table.dimension()];
        let mut n = 0usize;
        for link in snapshot.attribute_links.iter().filter(|l| members.contains(&l.entity)) {
            if let Some(v) = table.get(&link.word) {
                for (acc, x) in sum.iter_mut().zip(v) {
                    *acc += x;
                }
                n += 1;
            }
        }
        if n < min_words.max(1) {
            continue;
        }
        let mean: Vec<f64> = sum.into_iter().map(|x| x / n as f64).collect();
        if norm(&mean) == 0.0 {
            continue;
        }
        eligible.push((subject.label(registry), subject.clone(), mean));
    }
    if eligible.len() < 2 {
        return Err(AnalyticsError::NoEligibleSubjects);
    }
    eligible.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));

    let mut pairs = Vec::new();
    for (i, (la, sa, va)) in eligible.iter().enumerate() {
        for (lb, sb, vb) in &eligible[i + 1..] {
            let cos = dot(va, vb) / (norm(va) * norm(vb));
            pairs.push(CandidatePair {
                a: sa.clone(),
                a_label: la.clone(),
                b: sb.clone(),
                b_label: lb.clone(),
                distance: 1.0 - cos,
            });
        }
    }
    pairs.sort_by(|x, y| {
        y.distance
            .total_cmp(&x.distance)
            .then_with(|| x.a_label.cmp(&y.a_label))
            .then_with(|| x.b_label.cmp(&y.b_label))
            .then_with(|| x.a.cmp(&y.a))
            .then_with(|| x.b.cmp(&y.b))
    });
    pairs.truncate(top_n);
    Ok(pairs)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
