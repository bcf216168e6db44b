//! Ontology-guided dataset transformations.

use super::{PredicateMap, SceneGraph};
use crate::ontology::{Ontology, OntologyError};
use crate::reasoner::{inference_closure, Triplet, TripletSet};
use std::collections::BTreeSet;

/// Keep only graphs tagged with `required_tag`.
pub fn filter_by_tag(graphs: Vec<SceneGraph>, required_tag: &str) -> Vec<SceneGraph> {
    graphs
        .into_iter()
        .filter(|g| g.tags.contains(required_tag))
        .collect()
}

/// Rewrite source predicates to ontology predicates and drop unmatched
/// triplets. The object list is left untouched even when every triplet of
/// an object disappears.
pub fn apply_predicate_map(graph: &SceneGraph, map: &PredicateMap) -> SceneGraph {
    let mut triplets = TripletSet::new();
    for (t, prov) in graph.triplets.iter() {
        if let Some(target) = map.target_of(&t.predicate) {
            triplets.insert(
                Triplet::new(t.subject, target.to_string(), t.object),
                prov.clone(),
            );
        }
    }
    SceneGraph {
        triplets,
        ..graph.clone()
    }
}

/// Replace a graph's triplets with their inference closure.
pub fn augment_with_inference(
    graph: &SceneGraph,
    onto: &Ontology,
) -> Result<SceneGraph, OntologyError> {
    let triplets = inference_closure(onto, &graph.triplets)?;
    Ok(SceneGraph {
        triplets,
        ..graph.clone()
    })
}

/// Class-level triplet combinations observed in a training set, used to
/// restrict ground truth for zero-shot recall.
pub type SeenTripletRegistry = BTreeSet<(String, String, String)>;

/// Collect every (subject class, predicate, object class) combination
/// present in `graphs`.
pub fn build_seen_triplet_registry(graphs: &[SceneGraph]) -> SeenTripletRegistry {
    let mut registry = SeenTripletRegistry::new();
    for graph in graphs {
        let classes = graph.class_map();
        for t in graph.triplets.triplets() {
            if let (Some(sc), Some(oc)) = (classes.get(&t.subject), classes.get(&t.object)) {
                registry.insert(((*sc).to_string(), t.predicate.clone(), (*oc).to_string()));
            }
        }
    }
    registry
}
