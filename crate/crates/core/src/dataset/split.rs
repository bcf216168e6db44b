//! Stratified train/validation splitting.
//!
//! Multi-label stratification by least-frequent-predicate bucketing: tally
//! how many images each predicate appears in, put every image into the
//! bucket of its least frequent predicate, split the bucket of the overall
//! least frequent predicate by the requested fraction, then remove those
//! images and repeat with recomputed frequencies until all images are
//! assigned. Images with no triplets form one final bucket.

use super::{DatasetError, SceneGraph};
use crate::rng::SplitMix64;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Result of [`stratified_split`]. Both sides preserve the input order of
/// their images.
#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub train: Vec<SceneGraph>,
    pub validation: Vec<SceneGraph>,
}

/// Machine-diffable description of a split. Serialization is byte-stable
/// for fixed inputs and seed.
#[derive(Debug, Clone, Serialize)]
pub struct SplitManifest {
    pub seed: u64,
    pub validation_fraction: f64,
    pub train: ManifestSide,
    pub validation: ManifestSide,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestSide {
    pub num_images: usize,
    pub image_ids: Vec<String>,
    pub predicate_image_counts: BTreeMap<String, usize>,
}

impl SplitManifest {
    pub fn from_split(outcome: &SplitOutcome, seed: u64, validation_fraction: f64) -> Self {
        SplitManifest {
            seed,
            validation_fraction,
            train: ManifestSide::from_graphs(&outcome.train),
            validation: ManifestSide::from_graphs(&outcome.validation),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialization cannot fail")
    }
}

impl ManifestSide {
    fn from_graphs(graphs: &[SceneGraph]) -> Self {
        let mut image_ids: Vec<String> = graphs.iter().map(|g| g.image_id.clone()).collect();
        image_ids.sort();
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for graph in graphs {
            for pred in graph.predicates() {
                *counts.entry(pred.to_string()).or_default() += 1;
            }
        }
        ManifestSide {
            num_images: graphs.len(),
            image_ids,
            predicate_image_counts: counts,
        }
    }
}

/// Split `graphs` into train and validation sets.
///
/// Deterministic for a fixed seed: the seed only orders images within a
/// bucket before the fraction is taken. Buckets of size one go entirely to
/// train; larger buckets send `max(1, round(fraction * size))` images to
/// validation.
pub fn stratified_split(
    graphs: Vec<SceneGraph>,
    validation_fraction: f64,
    seed: u64,
) -> Result<SplitOutcome, DatasetError> {
    if !(validation_fraction > 0.0 && validation_fraction < 1.0) {
        return Err(DatasetError::InvalidFraction(validation_fraction));
    }

    let mut rng = SplitMix64::new(seed);
    // remaining image indexes, in input order
    let mut remaining: Vec<usize> = (0..graphs.len()).collect();
    let mut to_validation: BTreeSet<usize> = BTreeSet::new();

    loop {
        // tally per-predicate image frequency over remaining images
        let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
        for &idx in &remaining {
            for pred in graphs[idx].predicates() {
                *freq.entry(pred).or_default() += 1;
            }
        }
        if freq.is_empty() {
            break;
        }

        // overall least frequent predicate; ties resolved by name
        let (&target, _) = freq
            .iter()
            .min_by_key(|(name, count)| (**count, **name))
            .expect("non-empty frequency table");

        // bucket: images whose least frequent predicate is the target.
        // The target is globally minimal under (frequency, name), so this is
        // exactly the set of remaining images containing it.
        let bucket: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&idx| {
                graphs[idx]
                    .predicates()
                    .into_iter()
                    .min_by_key(|name| (freq[name], *name))
                    == Some(target)
            })
            .collect();
        debug_assert!(!bucket.is_empty());

        split_bucket(
            bucket.clone(),
            validation_fraction,
            &mut rng,
            &mut to_validation,
        );
        let bucket_set: BTreeSet<usize> = bucket.into_iter().collect();
        remaining.retain(|idx| !bucket_set.contains(idx));
    }

    // images with no predicates form one final bucket
    if !remaining.is_empty() {
        split_bucket(
            remaining.clone(),
            validation_fraction,
            &mut rng,
            &mut to_validation,
        );
    }

    let mut train = Vec::new();
    let mut validation = Vec::new();
    for (idx, graph) in graphs.into_iter().enumerate() {
        if to_validation.contains(&idx) {
            validation.push(graph);
        } else {
            train.push(graph);
        }
    }
    Ok(SplitOutcome { train, validation })
}

fn split_bucket(
    mut bucket: Vec<usize>,
    fraction: f64,
    rng: &mut SplitMix64,
    to_validation: &mut BTreeSet<usize>,
) {
    if bucket.len() < 2 {
        return; // singletons go to train
    }
    rng.shuffle(&mut bucket);
    let count = ((fraction * bucket.len() as f64).round() as usize).max(1);
    let count = count.min(bucket.len() - 1); // keep at least one in train
    for &idx in bucket.iter().take(count) {
        to_validation.insert(idx);
    }
}
