//! Dataset density statistics.

use super::SceneGraph;
use serde::Serialize;

/// Aggregate statistics over a list of scene graphs.
///
/// `pct_pairs_annotated` measures annotation density: per image, the number
/// of annotated ordered pairs as a percentage of all ordered pairs among
/// triplet-connected objects. Images with fewer than two connected objects
/// are skipped for that row only; all other rows average over every image.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub num_images: usize,
    pub connected_objects_per_image: f64,
    pub triplets_per_image: f64,
    pub annotated_pairs_per_image: f64,
    pub pct_pairs_annotated: f64,
    /// How many images entered the percentage row.
    pub images_with_pairs: usize,
}

pub fn compute_stats(graphs: &[SceneGraph]) -> DatasetStats {
    let num_images = graphs.len();
    let mut connected_sum = 0usize;
    let mut triplet_sum = 0usize;
    let mut pair_sum = 0usize;
    let mut pct_sum = 0.0f64;
    let mut pct_images = 0usize;

    for graph in graphs {
        let connected = graph.connected_objects().len();
        let pairs = graph.annotated_pairs().len();
        connected_sum += connected;
        triplet_sum += graph.triplets.len();
        pair_sum += pairs;
        if connected >= 2 {
            pct_sum += pairs as f64 / (connected * (connected - 1)) as f64 * 100.0;
            pct_images += 1;
        }
    }

    let mean = |sum: usize| {
        if num_images == 0 {
            0.0
        } else {
            sum as f64 / num_images as f64
        }
    };

    DatasetStats {
        num_images,
        connected_objects_per_image: mean(connected_sum),
        triplets_per_image: mean(triplet_sum),
        annotated_pairs_per_image: mean(pair_sum),
        pct_pairs_annotated: if pct_images == 0 {
            0.0
        } else {
            pct_sum / pct_images as f64
        },
        images_with_pairs: pct_images,
    }
}
