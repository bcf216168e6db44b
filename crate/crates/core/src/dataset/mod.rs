//! Scene-graph dataset model and preparation pipeline: ingestion,
//! tag filtering, predicate mapping, inference-based augmentation,
//! statistics and stratified splitting.

mod io;
mod split;
mod stats;
mod transform;

pub use io::{load_dataset, load_predicate_map, save_dataset, DatasetError, LoadedDataset};
pub use split::{stratified_split, SplitManifest, SplitOutcome};
pub use stats::{compute_stats, DatasetStats};
pub use transform::{
    apply_predicate_map, augment_with_inference, build_seen_triplet_registry, filter_by_tag,
    SeenTripletRegistry,
};

use crate::reasoner::{ObjectId, TripletSet};
use indexmap::IndexMap;
use std::collections::BTreeSet;

/// One annotated object in an image.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneObject {
    pub id: ObjectId,
    pub class_name: String,
    /// (x, y, width, height) in pixels.
    pub bbox: [f64; 4],
}

impl SceneObject {
    pub fn new(id: ObjectId, class_name: impl Into<String>, bbox: [f64; 4]) -> Self {
        SceneObject {
            id,
            class_name: class_name.into(),
            bbox,
        }
    }
}

/// One annotated image: objects plus relation triplets between them.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneGraph {
    pub image_id: String,
    pub width: u32,
    pub height: u32,
    pub tags: BTreeSet<String>,
    pub objects: Vec<SceneObject>,
    pub triplets: TripletSet,
}

impl SceneGraph {
    /// Map object ids to class names.
    pub fn class_map(&self) -> IndexMap<ObjectId, &str> {
        self.objects
            .iter()
            .map(|o| (o.id, o.class_name.as_str()))
            .collect()
    }

    /// Object ids incident to at least one triplet.
    pub fn connected_objects(&self) -> BTreeSet<ObjectId> {
        let mut out = BTreeSet::new();
        for t in self.triplets.triplets() {
            out.insert(t.subject);
            out.insert(t.object);
        }
        out
    }

    /// Ordered object pairs carrying at least one triplet.
    pub fn annotated_pairs(&self) -> BTreeSet<(ObjectId, ObjectId)> {
        self.triplets
            .triplets()
            .map(|t| (t.subject, t.object))
            .collect()
    }

    /// Distinct predicate names used in this image.
    pub fn predicates(&self) -> BTreeSet<&str> {
        self.triplets
            .triplets()
            .map(|t| t.predicate.as_str())
            .collect()
    }
}

/// Mapping from ontology predicates to the source dataset's equivalent
/// relation labels.
///
/// Every key implicitly maps to itself, so applying a map is idempotent.
#[derive(Debug, Clone, Default)]
pub struct PredicateMap {
    entries: IndexMap<String, Vec<String>>,
}

impl PredicateMap {
    /// Build from (ontology predicate, source synonyms) entries, rejecting
    /// any source label claimed by two different ontology predicates.
    pub fn new(entries: IndexMap<String, Vec<String>>) -> Result<Self, DatasetError> {
        let mut owner: IndexMap<&str, &str> = IndexMap::new();
        for (target, sources) in &entries {
            // the key itself counts as a source
            for source in sources.iter().map(|s| s.as_str()).chain([target.as_str()]) {
                match owner.get(source) {
                    Some(existing) if *existing != target.as_str() => {
                        return Err(DatasetError::AmbiguousPredicateMapping {
                            label: source.to_string(),
                            first: existing.to_string(),
                            second: target.clone(),
                        });
                    }
                    _ => {
                        owner.insert(source, target);
                    }
                }
            }
        }
        Ok(PredicateMap { entries })
    }

    /// Ontology predicate for a source label, if mapped.
    pub fn target_of(&self, source: &str) -> Option<&str> {
        for (target, sources) in &self.entries {
            if target == source || sources.iter().any(|s| s == source) {
                return Some(target);
            }
        }
        None
    }

    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|s| s.as_str())
    }

    pub fn entries(&self) -> &IndexMap<String, Vec<String>> {
        &self.entries
    }
}
