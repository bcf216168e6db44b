//! Top-K selection pipeline over ranked proposals.

use super::prune::{axiom_prune, sort_by_rank, tensor_filter};
use super::{
    ImplicitConflict, ImplicitTriplet, PruneReason, ScoredTriplet, SelectionConfig, SelectionResult,
};
use crate::ontology::{Ontology, OntologyError};
use crate::reasoner::{inference_closure, ConstraintTensor, ObjectId, Provenance, TripletSet};
use indexmap::IndexMap;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SelectError {
    #[error("top_k and graph_constraint must be positive")]
    InvalidConfig,
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// Run the full post-processing pipeline on one image's proposals:
///
/// 1. keep the `graph_constraint` highest-scoring predicates per ordered
///    object pair;
/// 2. drop proposals ruled out by the domain/range tensor (optional);
/// 3. greedily prune functional/inverse-functional conflicts (optional);
/// 4. walk the survivors in rank order, accepting until `top_k` explicit
///    triplets are taken. With implicit expansion on, each accepted triplet
///    also contributes its inference closure: implicit triplets never
///    consume budget, and a survivor already present implicitly is skipped
///    without consuming budget either.
pub fn select_top(
    proposals: &[ScoredTriplet],
    config: &SelectionConfig,
    onto: &Ontology,
    tensor: &ConstraintTensor,
    classes: &IndexMap<ObjectId, &str>,
) -> Result<SelectionResult, SelectError> {
    if config.top_k == 0 || config.graph_constraint == 0 {
        return Err(SelectError::InvalidConfig);
    }
    for proposal in proposals {
        if onto.predicate(&proposal.predicate).is_none() {
            return Err(OntologyError::UnknownPredicate(proposal.predicate.clone()).into());
        }
    }

    let deduped = dedupe_keep_best(proposals);
    let capped = per_pair_cap(&deduped, config.graph_constraint, onto);

    let mut pruned = Vec::new();
    let survivors = if config.apply_tensor_filter {
        let (kept, dropped) = tensor_filter(&capped, tensor, classes)?;
        pruned.extend(dropped);
        kept
    } else {
        capped
    };

    let mut ranked = if config.apply_axiom_pruning {
        let (accepted, dropped) = axiom_prune(&survivors, onto)?;
        pruned.extend(dropped);
        accepted
    } else {
        let mut sorted = survivors;
        sort_by_rank(&mut sorted, onto);
        sorted
    };

    let mut result = SelectionResult {
        pruned,
        ..Default::default()
    };

    // rank walk with optional implicit expansion
    let mut graph = TripletSet::new();
    for proposal in ranked.drain(..) {
        if result.accepted.len() == config.top_k {
            break;
        }
        let triplet = proposal.triplet();
        if graph.contains(&triplet) {
            // already entailed by an earlier acceptance: free of charge
            continue;
        }
        graph.insert(triplet, Provenance::Asserted);
        if config.expand_implicit {
            let closed = inference_closure(onto, &graph).map_err(SelectError::Ontology)?;
            for (t, prov) in closed.iter() {
                if graph.contains(t) {
                    continue;
                }
                if let Provenance::Inferred { axiom, sources } = prov {
                    result.implicit.push(ImplicitTriplet {
                        triplet: t.clone(),
                        score: proposal.score,
                        axiom: *axiom,
                        sources: sources.clone(),
                    });
                    result
                        .implicit_conflicts
                        .extend(functional_clashes(t, &graph, onto));
                }
            }
            graph = closed;
        }
        result.accepted.push(proposal);
    }

    Ok(result)
}

/// Functional/inverse-functional clashes between a new implicit triplet and
/// the triplets already in the graph.
fn functional_clashes(
    implicit: &crate::reasoner::Triplet,
    graph: &TripletSet,
    onto: &Ontology,
) -> Vec<ImplicitConflict> {
    let mut out = Vec::new();
    let Some(def) = onto.predicate(&implicit.predicate) else {
        return out;
    };
    for existing in graph.triplets() {
        if existing.predicate != implicit.predicate {
            continue;
        }
        if def.functional
            && existing.subject == implicit.subject
            && existing.object != implicit.object
        {
            out.push(ImplicitConflict {
                implicit: implicit.clone(),
                conflicts_with: existing.clone(),
                kind: PruneReason::Functional,
            });
        }
        if def.inverse_functional
            && existing.object == implicit.object
            && existing.subject != implicit.subject
        {
            out.push(ImplicitConflict {
                implicit: implicit.clone(),
                conflicts_with: existing.clone(),
                kind: PruneReason::InverseFunctional,
            });
        }
    }
    out
}

/// Collapse duplicate (subject, predicate, object) proposals to the highest
/// score, preserving first-occurrence order.
fn dedupe_keep_best(proposals: &[ScoredTriplet]) -> Vec<ScoredTriplet> {
    let mut best: IndexMap<(ObjectId, &str, ObjectId), ScoredTriplet> = IndexMap::new();
    for p in proposals {
        match best.entry((p.subject, p.predicate.as_str(), p.object)) {
            indexmap::map::Entry::Vacant(slot) => {
                slot.insert(p.clone());
            }
            indexmap::map::Entry::Occupied(mut slot) => {
                if p.score > slot.get().score {
                    slot.insert(p.clone());
                }
            }
        }
    }
    best.into_values().collect()
}

/// Keep only the `k` highest-scoring predicates per ordered object pair,
/// preserving the input's relative order.
fn per_pair_cap(proposals: &[ScoredTriplet], k: usize, onto: &Ontology) -> Vec<ScoredTriplet> {
    let mut per_pair: HashMap<(ObjectId, ObjectId), Vec<usize>> = HashMap::new();
    for (idx, p) in proposals.iter().enumerate() {
        per_pair.entry((p.subject, p.object)).or_default().push(idx);
    }
    let mut keep = vec![false; proposals.len()];
    for indexes in per_pair.values() {
        let mut ranked: Vec<usize> = indexes.clone();
        ranked.sort_by(|&a, &b| {
            proposals[b]
                .score
                .total_cmp(&proposals[a].score)
                .then_with(|| {
                    onto.predicate_index(&proposals[a].predicate)
                        .cmp(&onto.predicate_index(&proposals[b].predicate))
                })
        });
        for &idx in ranked.iter().take(k) {
            keep[idx] = true;
        }
    }
    proposals
        .iter()
        .enumerate()
        .filter(|(idx, _)| keep[*idx])
        .map(|(_, p)| p.clone())
        .collect()
}
