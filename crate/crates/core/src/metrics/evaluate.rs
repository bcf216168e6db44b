//! Full evaluation-grid computation.

use super::recall::{
    align, dataset_recall, mean_recall_at_k, restrict_to_labeled_pairs, zero_shot_recall_at_k,
};
use super::{MetricCell, MetricKind, MetricsConfig, MetricsReport, PredicateRow};
use crate::dataset::SceneGraph;
use crate::postproc::{ImageScores, ScoredTriplet};
use crate::reasoner::TripletSet;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("ground truth and proposals disagree on image ids")]
    ImageIdMismatch,
}

/// Compute every (metric, K, k) cell of the configured grid.
///
/// Ground truth and proposals must cover the same image ids. Values are
/// percentages in [0, 100]; a cell is `None` when every image was skipped
/// for its metric.
pub fn evaluate(
    gt: &[SceneGraph],
    proposals: &[ImageScores],
    config: &MetricsConfig,
) -> Result<MetricsReport, EvalError> {
    let aligned = align(gt, proposals).ok_or(EvalError::ImageIdMismatch)?;

    // optional labeled-pair restriction, applied once before ranking
    let prepared: Vec<(&SceneGraph, Vec<ScoredTriplet>)> = aligned
        .into_iter()
        .map(|(graph, scores)| {
            let scores = if config.restrict_to_labeled_pairs {
                restrict_to_labeled_pairs(&graph.triplets, scores)
            } else {
                scores.to_vec()
            };
            (graph, scores)
        })
        .collect();

    let plain: Vec<(&TripletSet, &[ScoredTriplet])> = prepared
        .iter()
        .map(|(graph, scores)| (&graph.triplets, scores.as_slice()))
        .collect();
    let with_graphs: Vec<(&SceneGraph, &[ScoredTriplet])> = prepared
        .iter()
        .map(|(graph, scores)| (*graph, scores.as_slice()))
        .collect();

    // images evaluated, plus one (K, k, value) entry per grid point
    type RowAccumulator = (usize, Vec<(usize, usize, Option<f64>)>);

    let mut cells = Vec::new();
    let mut images_evaluated = 0;
    let mut images_skipped = 0;
    let mut zero_shot_counts: Option<(usize, usize)> = None;
    let mut predicate_rows: BTreeMap<String, RowAccumulator> = BTreeMap::new();

    for &top_k in &config.k_values {
        for &graph_constraint in &config.graph_constraints {
            let (value, evaluated, skipped) =
                dataset_recall(&plain, top_k, graph_constraint, config.aggregation);
            images_evaluated = evaluated;
            images_skipped = skipped;
            cells.push(MetricCell {
                metric: MetricKind::Recall,
                top_k,
                graph_constraint,
                value: value.map(|v| v * 100.0),
            });

            let mr = mean_recall_at_k(&plain, top_k, graph_constraint, config.aggregation);
            cells.push(MetricCell {
                metric: MetricKind::MeanRecall,
                top_k,
                graph_constraint,
                value: mr.mean.map(|v| v * 100.0),
            });
            for (predicate, value, evaluated) in mr.per_predicate {
                let row = predicate_rows.entry(predicate).or_default();
                row.0 = evaluated;
                row.1.push((top_k, graph_constraint, Some(value * 100.0)));
            }

            if let Some(registry) = &config.zero_shot_registry {
                let (value, evaluated, skipped) = zero_shot_recall_at_k(
                    &with_graphs,
                    registry,
                    top_k,
                    graph_constraint,
                    config.aggregation,
                );
                zero_shot_counts = Some((evaluated, skipped));
                cells.push(MetricCell {
                    metric: MetricKind::ZeroShotRecall,
                    top_k,
                    graph_constraint,
                    value: value.map(|v| v * 100.0),
                });
            }
        }
    }

    Ok(MetricsReport {
        aggregation: config.aggregation,
        cells,
        per_predicate: predicate_rows
            .into_iter()
            .map(|(predicate, (images_evaluated, values))| PredicateRow {
                predicate,
                images_evaluated,
                values,
            })
            .collect(),
        images_evaluated,
        images_skipped,
        zero_shot_images_evaluated: zero_shot_counts.map(|(e, _)| e),
        zero_shot_images_skipped: zero_shot_counts.map(|(_, s)| s),
    })
}
