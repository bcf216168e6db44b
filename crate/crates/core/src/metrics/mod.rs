//! Predicate-detection evaluation: R@K, zR@K and mR@K under a tunable
//! per-pair graph constraint k, with explicit handling of the edge cases
//! that make recall comparisons ambiguous (empty ground truth, K below the
//! ground-truth size, per-pair predicate caps, aggregation mode and
//! labeled-pair restriction).

mod adapt;
mod evaluate;
mod recall;
mod report;

pub use adapt::adapt_scores;
pub use evaluate::{evaluate, EvalError};
pub use recall::{
    dataset_recall, mean_recall_at_k, recall_at_k, zero_shot_recall_at_k, MeanRecall,
};
pub use report::{render_report, report_to_json};

use crate::dataset::SeenTripletRegistry;
use serde::Serialize;

/// How per-image recalls are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Mean of per-image recall values (each suitable image weighs the
    /// same).
    PerImageMean,
    /// Hits and divisors summed across the dataset before dividing, which
    /// weighs images by their annotation count.
    DatasetMicro,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Recall,
    MeanRecall,
    ZeroShotRecall,
}

/// Evaluation grid and switches.
#[derive(Debug, Clone)]
pub struct MetricsConfig {
    /// Top-K cutoffs.
    pub k_values: Vec<usize>,
    /// Graph-constraint values (max predicates kept per ordered pair).
    pub graph_constraints: Vec<usize>,
    pub aggregation: Aggregation,
    /// Drop proposals on object pairs without any ground-truth label before
    /// ranking.
    pub restrict_to_labeled_pairs: bool,
    /// Seen class-level triplets from the training split; enables zR@K.
    pub zero_shot_registry: Option<SeenTripletRegistry>,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        MetricsConfig {
            k_values: vec![20, 50, 100],
            graph_constraints: vec![1, 8],
            aggregation: Aggregation::PerImageMean,
            restrict_to_labeled_pairs: false,
            zero_shot_registry: None,
        }
    }
}

/// One (metric, K, k) value, as a percentage. `None` when every image was
/// skipped for that metric.
#[derive(Debug, Clone, Serialize)]
pub struct MetricCell {
    pub metric: MetricKind,
    pub top_k: usize,
    pub graph_constraint: usize,
    pub value: Option<f64>,
}

/// Per-predicate recall values backing the mR@K cells.
#[derive(Debug, Clone, Serialize)]
pub struct PredicateRow {
    pub predicate: String,
    pub images_evaluated: usize,
    /// (K, k, value%) triples over the configured grid.
    pub values: Vec<(usize, usize, Option<f64>)>,
}

/// Full evaluation output.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub aggregation: Aggregation,
    pub cells: Vec<MetricCell>,
    pub per_predicate: Vec<PredicateRow>,
    /// Images with non-empty ground truth (the R@K basis).
    pub images_evaluated: usize,
    pub images_skipped: usize,
    /// Image counts for the zero-shot restriction, when enabled.
    pub zero_shot_images_evaluated: Option<usize>,
    pub zero_shot_images_skipped: Option<usize>,
}

impl MetricsReport {
    /// Value of a specific cell, if present.
    pub fn cell(&self, metric: MetricKind, top_k: usize, graph_constraint: usize) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| {
                c.metric == metric && c.top_k == top_k && c.graph_constraint == graph_constraint
            })
            .and_then(|c| c.value)
    }
}
