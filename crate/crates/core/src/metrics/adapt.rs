//! Score adaptation for scorers trained on an unmapped source dataset:
//! each ontology predicate receives the mean of the scores of its mapped
//! source predicates, per object pair. Source predicates without a mapping
//! are dropped; ontology predicates whose sources were all absent stay
//! absent.

use crate::dataset::PredicateMap;
use crate::postproc::ScoredTriplet;
use crate::reasoner::ObjectId;
use indexmap::IndexMap;

pub fn adapt_scores(proposals: &[ScoredTriplet], map: &PredicateMap) -> Vec<ScoredTriplet> {
    // (pair, target predicate) -> scores of mapped source predicates,
    // preserving first-appearance order of pairs
    let mut grouped: IndexMap<(ObjectId, ObjectId, &str), Vec<f64>> = IndexMap::new();
    for p in proposals {
        if let Some(target) = map.target_of(&p.predicate) {
            grouped
                .entry((p.subject, p.object, target))
                .or_default()
                .push(p.score);
        }
    }
    grouped
        .into_iter()
        .map(|((subject, object, target), scores)| {
            let mean = scores.iter().sum::<f64>() / scores.len() as f64;
            ScoredTriplet::new(subject, target, object, mean)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map() -> PredicateMap {
        let mut entries = IndexMap::new();
        entries.insert(
            "sitting on".to_string(),
            vec!["sits on".to_string(), "seated on".to_string()],
        );
        PredicateMap::new(entries).unwrap()
    }

    #[test]
    fn averages_mapped_source_scores() {
        let proposals = vec![
            ScoredTriplet::new(0, "sits on", 1, 0.4),
            ScoredTriplet::new(0, "seated on", 1, 0.8),
            ScoredTriplet::new(0, "wearing", 1, 0.9), // unmapped: dropped
        ];
        let adapted = adapt_scores(&proposals, &map());
        assert_eq!(adapted.len(), 1);
        assert_eq!(adapted[0].predicate, "sitting on");
        assert!((adapted[0].score - 0.6).abs() < 1e-12);
    }

    #[test]
    fn pairs_stay_separate() {
        let proposals = vec![
            ScoredTriplet::new(0, "sits on", 1, 0.4),
            ScoredTriplet::new(2, "sits on", 1, 0.2),
        ];
        let adapted = adapt_scores(&proposals, &map());
        assert_eq!(adapted.len(), 2);
    }

    #[test]
    fn absent_sources_stay_absent() {
        let adapted = adapt_scores(&[], &map());
        assert!(adapted.is_empty());
    }
}
