//! Recall computation for one image and aggregation over a dataset.

use super::Aggregation;
use crate::dataset::{SceneGraph, SeenTripletRegistry};
use crate::postproc::{ImageScores, ScoredTriplet};
use crate::reasoner::{ObjectId, Triplet, TripletSet};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Hit and divisor counters for one image; `hits / divisor` is the recall.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageCounters {
    pub hits: usize,
    pub divisor: usize,
}

/// The Top-K proposal selection for an image: duplicates collapsed to their
/// best score, at most `graph_constraint` predicates per ordered pair, then
/// the K highest overall. Ties are broken by (subject, object, predicate
/// name) so selections are reproducible.
fn top_k_selection(
    proposals: &[ScoredTriplet],
    top_k: usize,
    graph_constraint: usize,
) -> Vec<Triplet> {
    // collapse duplicates to the best score
    let mut best: HashMap<(ObjectId, &str, ObjectId), f64> = HashMap::new();
    for p in proposals {
        let entry = best
            .entry((p.subject, p.predicate.as_str(), p.object))
            .or_insert(f64::NEG_INFINITY);
        if p.score > *entry {
            *entry = p.score;
        }
    }

    // per-pair cap
    let mut per_pair: BTreeMap<(ObjectId, ObjectId), Vec<(&str, f64)>> = BTreeMap::new();
    for ((s, p, o), score) in &best {
        per_pair.entry((*s, *o)).or_default().push((p, *score));
    }
    let mut survivors: Vec<(ObjectId, &str, ObjectId, f64)> = Vec::new();
    for ((s, o), mut preds) in per_pair {
        preds.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        for (p, score) in preds.into_iter().take(graph_constraint) {
            survivors.push((s, p, o, score));
        }
    }

    // global rank and cut
    survivors.sort_by(|a, b| {
        b.3.total_cmp(&a.3)
            .then_with(|| a.0.cmp(&b.0))
            .then_with(|| a.2.cmp(&b.2))
            .then_with(|| a.1.cmp(b.1))
    });
    survivors
        .into_iter()
        .take(top_k)
        .map(|(s, p, o, _)| Triplet::new(s, p, o))
        .collect()
}

/// Effective ground-truth size: per ordered pair, at most `graph_constraint`
/// predicates count.
fn effective_gt_size(gt: &TripletSet, graph_constraint: usize) -> usize {
    let mut per_pair: BTreeMap<(ObjectId, ObjectId), usize> = BTreeMap::new();
    for t in gt.triplets() {
        *per_pair.entry((t.subject, t.object)).or_default() += 1;
    }
    per_pair
        .values()
        .map(|count| (*count).min(graph_constraint))
        .sum()
}

/// Hit/divisor counters for one image, or `None` when the (capped) ground
/// truth is empty and the image must be skipped.
pub fn image_counters(
    gt: &TripletSet,
    proposals: &[ScoredTriplet],
    top_k: usize,
    graph_constraint: usize,
) -> Option<ImageCounters> {
    let gt_size = effective_gt_size(gt, graph_constraint);
    if gt_size == 0 {
        return None;
    }
    let selection = top_k_selection(proposals, top_k, graph_constraint);
    let hits = selection.iter().filter(|t| gt.contains(t)).count();
    Some(ImageCounters {
        hits,
        divisor: top_k.min(gt_size),
    })
}

/// Recall@K for one image under graph constraint k, or `None` when the
/// image has no ground truth to recall.
pub fn recall_at_k(
    gt: &TripletSet,
    proposals: &[ScoredTriplet],
    top_k: usize,
    graph_constraint: usize,
) -> Option<f64> {
    image_counters(gt, proposals, top_k, graph_constraint).map(|c| c.hits as f64 / c.divisor as f64)
}

/// Aggregate per-image counters into a dataset value in [0, 1].
fn aggregate(counters: &[ImageCounters], aggregation: Aggregation) -> Option<f64> {
    if counters.is_empty() {
        return None;
    }
    match aggregation {
        Aggregation::PerImageMean => Some(
            counters
                .iter()
                .map(|c| c.hits as f64 / c.divisor as f64)
                .sum::<f64>()
                / counters.len() as f64,
        ),
        Aggregation::DatasetMicro => {
            let hits: usize = counters.iter().map(|c| c.hits).sum();
            let divisors: usize = counters.iter().map(|c| c.divisor).sum();
            Some(hits as f64 / divisors as f64)
        }
    }
}

/// Dataset-level R@K over aligned (ground truth, proposals) pairs. Returns
/// the value in [0, 1] plus (evaluated, skipped) image counts.
pub fn dataset_recall(
    images: &[(&TripletSet, &[ScoredTriplet])],
    top_k: usize,
    graph_constraint: usize,
    aggregation: Aggregation,
) -> (Option<f64>, usize, usize) {
    let mut counters = Vec::new();
    let mut skipped = 0;
    for (gt, proposals) in images {
        match image_counters(gt, proposals, top_k, graph_constraint) {
            Some(c) => counters.push(c),
            None => skipped += 1,
        }
    }
    (aggregate(&counters, aggregation), counters.len(), skipped)
}

/// Per-predicate recall table plus its arithmetic mean.
#[derive(Debug, Clone)]
pub struct MeanRecall {
    /// (predicate, value in [0,1], images evaluated), for predicates with at
    /// least one evaluated image.
    pub per_predicate: Vec<(String, f64, usize)>,
    pub mean: Option<f64>,
}

/// mR@K: R@K computed independently per predicate class, then averaged.
/// Images whose ground truth lacks the predicate are skipped for that
/// predicate's column.
pub fn mean_recall_at_k(
    images: &[(&TripletSet, &[ScoredTriplet])],
    top_k: usize,
    graph_constraint: usize,
    aggregation: Aggregation,
) -> MeanRecall {
    let mut predicates: BTreeSet<&str> = BTreeSet::new();
    for (gt, _) in images {
        for t in gt.triplets() {
            predicates.insert(&t.predicate);
        }
    }

    let mut per_predicate = Vec::new();
    for predicate in predicates {
        let mut counters = Vec::new();
        for (gt, proposals) in images {
            let restricted: TripletSet = gt
                .triplets()
                .filter(|t| t.predicate == predicate)
                .cloned()
                .collect();
            if let Some(c) = image_counters(&restricted, proposals, top_k, graph_constraint) {
                counters.push(c);
            }
        }
        if let Some(value) = aggregate(&counters, aggregation) {
            per_predicate.push((predicate.to_string(), value, counters.len()));
        }
    }

    let mean = if per_predicate.is_empty() {
        None
    } else {
        Some(per_predicate.iter().map(|(_, v, _)| v).sum::<f64>() / per_predicate.len() as f64)
    };
    MeanRecall {
        per_predicate,
        mean,
    }
}

/// Ground truth restricted to class-level combinations absent from the
/// training registry.
pub fn zero_shot_gt(gt: &SceneGraph, registry: &SeenTripletRegistry) -> TripletSet {
    let classes = gt.class_map();
    gt.triplets
        .triplets()
        .filter(
            |t| match (classes.get(&t.subject), classes.get(&t.object)) {
                (Some(sc), Some(oc)) => {
                    !registry.contains(&((*sc).to_string(), t.predicate.clone(), (*oc).to_string()))
                }
                _ => false,
            },
        )
        .cloned()
        .collect()
}

/// zR@K over a dataset: identical to R@K after restricting every image's
/// ground truth to unseen class-level combinations.
pub fn zero_shot_recall_at_k(
    images: &[(&SceneGraph, &[ScoredTriplet])],
    registry: &SeenTripletRegistry,
    top_k: usize,
    graph_constraint: usize,
    aggregation: Aggregation,
) -> (Option<f64>, usize, usize) {
    let restricted: Vec<(TripletSet, &[ScoredTriplet])> = images
        .iter()
        .map(|(gt, proposals)| (zero_shot_gt(gt, registry), *proposals))
        .collect();
    let borrowed: Vec<(&TripletSet, &[ScoredTriplet])> =
        restricted.iter().map(|(gt, p)| (gt, *p)).collect();
    dataset_recall(&borrowed, top_k, graph_constraint, aggregation)
}

/// Drop proposals on ordered pairs without any ground-truth annotation.
pub fn restrict_to_labeled_pairs(
    gt: &TripletSet,
    proposals: &[ScoredTriplet],
) -> Vec<ScoredTriplet> {
    let labeled: BTreeSet<(ObjectId, ObjectId)> =
        gt.triplets().map(|t| (t.subject, t.object)).collect();
    proposals
        .iter()
        .filter(|p| labeled.contains(&(p.subject, p.object)))
        .cloned()
        .collect()
}

/// Pair proposals with ground truth by image id; `None` on any mismatch.
pub(super) fn align<'a>(
    gt: &'a [SceneGraph],
    proposals: &'a [ImageScores],
) -> Option<Vec<(&'a SceneGraph, &'a [ScoredTriplet])>> {
    if gt.len() != proposals.len() {
        return None;
    }
    let by_id: HashMap<&str, &ImageScores> =
        proposals.iter().map(|p| (p.image_id.as_str(), p)).collect();
    if by_id.len() != proposals.len() {
        return None;
    }
    gt.iter()
        .map(|g| {
            by_id
                .get(g.image_id.as_str())
                .map(|p| (g, p.scores.as_slice()))
        })
        .collect()
}
