//! A no-ML reference scorer and the multi-label ranking loss.
//!
//! The scorer ranks predicates for an object pair by their smoothed
//! log-likelihood under the training-set frequency distribution of
//! (subject class, object class, predicate) triplets. It exists so the
//! whole pipeline — scoring, post-processing, metrics — runs end to end
//! without a neural network.

mod loss;

pub use loss::{hinge_loss, LossError, LossInput};

use crate::dataset::SceneGraph;
use crate::postproc::ScoredTriplet;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Per-class-pair predicate frequency counts with additive smoothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPrior {
    /// subject class -> object class -> predicate -> count
    counts: BTreeMap<String, BTreeMap<String, BTreeMap<String, u64>>>,
    /// Scoring universe, in deterministic (sorted) order.
    predicates: Vec<String>,
    smoothing: f64,
}

impl FrequencyPrior {
    /// Tally every training triplet by (subject class, object class,
    /// predicate). The predicate universe is taken from the training data.
    pub fn fit(train: &[SceneGraph], smoothing: f64) -> FrequencyPrior {
        let mut predicates: Vec<String> = Vec::new();
        for graph in train {
            for pred in graph.predicates() {
                if !predicates.iter().any(|p| p == pred) {
                    predicates.push(pred.to_string());
                }
            }
        }
        predicates.sort();
        Self::fit_with_predicates(train, smoothing, predicates)
    }

    /// Like [`FrequencyPrior::fit`] but with an explicit predicate universe
    /// (e.g. the ontology's predicate list).
    pub fn fit_with_predicates(
        train: &[SceneGraph],
        smoothing: f64,
        predicates: Vec<String>,
    ) -> FrequencyPrior {
        assert!(smoothing >= 0.0, "smoothing must be non-negative");
        let mut counts: BTreeMap<String, BTreeMap<String, BTreeMap<String, u64>>> = BTreeMap::new();
        for graph in train {
            let classes = graph.class_map();
            for t in graph.triplets.triplets() {
                let (Some(sc), Some(oc)) = (classes.get(&t.subject), classes.get(&t.object)) else {
                    continue;
                };
                *counts
                    .entry((*sc).to_string())
                    .or_default()
                    .entry((*oc).to_string())
                    .or_default()
                    .entry(t.predicate.clone())
                    .or_default() += 1;
            }
        }
        FrequencyPrior {
            counts,
            predicates,
            smoothing,
        }
    }

    pub fn predicates(&self) -> &[String] {
        &self.predicates
    }

    fn pair_counts(
        &self,
        subject_class: &str,
        object_class: &str,
    ) -> Option<&BTreeMap<String, u64>> {
        self.counts.get(subject_class)?.get(object_class)
    }

    /// Smoothed log-likelihood of a predicate for a class pair, or `None`
    /// when the combination carries no information (zero count and zero
    /// smoothing) and should be an absent proposal.
    pub fn score(&self, subject_class: &str, object_class: &str, predicate: &str) -> Option<f64> {
        if !self.predicates.iter().any(|p| p == predicate) {
            return None;
        }
        let pair = self.pair_counts(subject_class, object_class);
        let count = pair.and_then(|m| m.get(predicate)).copied().unwrap_or(0) as f64;
        let total = pair.map(|m| m.values().sum::<u64>()).unwrap_or(0) as f64;
        let denom = total + self.smoothing * self.predicates.len() as f64;
        if count + self.smoothing <= 0.0 || denom <= 0.0 {
            return None;
        }
        Some(((count + self.smoothing) / denom).ln())
    }

    /// Raw count for a (subject class, object class, predicate) combination.
    pub fn count(&self, subject_class: &str, object_class: &str, predicate: &str) -> u64 {
        self.pair_counts(subject_class, object_class)
            .and_then(|m| m.get(predicate))
            .copied()
            .unwrap_or(0)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("prior serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<FrequencyPrior, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Score every (ordered pair, predicate) combination of an image. Emits
/// proposals in object-list order, predicates in universe order.
pub fn score_image(prior: &FrequencyPrior, graph: &SceneGraph) -> Vec<ScoredTriplet> {
    let mut out = Vec::new();
    for subject in &graph.objects {
        for object in &graph.objects {
            if subject.id == object.id {
                continue;
            }
            for predicate in prior.predicates() {
                if let Some(score) = prior.score(&subject.class_name, &object.class_name, predicate)
                {
                    out.push(ScoredTriplet::new(
                        subject.id,
                        predicate.clone(),
                        object.id,
                        score,
                    ));
                }
            }
        }
    }
    out
}
