//! Proposal filtering: domain/range lookup and greedy mutual-exclusion
//! pruning under functional axioms.

use super::{PruneReason, ScoredTriplet};
use crate::ontology::{Ontology, OntologyError};
use crate::reasoner::{ConstraintTensor, ObjectId};
use indexmap::IndexMap;
use std::collections::HashMap;

/// Proposals split into survivors and pruned entries with reasons.
pub type FilterOutcome = (Vec<ScoredTriplet>, Vec<(ScoredTriplet, PruneReason)>);

/// Split proposals into those whose (subject class, object class, predicate)
/// bit is set and those it rules out. Relative order is preserved.
pub fn tensor_filter(
    proposals: &[ScoredTriplet],
    tensor: &ConstraintTensor,
    classes: &IndexMap<ObjectId, &str>,
) -> Result<FilterOutcome, OntologyError> {
    let mut kept = Vec::new();
    let mut pruned = Vec::new();
    for proposal in proposals {
        let subject_class = classes
            .get(&proposal.subject)
            .ok_or_else(|| OntologyError::UnknownClass(format!("object #{}", proposal.subject)))?;
        let object_class = classes
            .get(&proposal.object)
            .ok_or_else(|| OntologyError::UnknownClass(format!("object #{}", proposal.object)))?;
        if tensor.allowed(subject_class, object_class, &proposal.predicate)? {
            kept.push(proposal.clone());
        } else {
            pruned.push((proposal.clone(), PruneReason::DomainRange));
        }
    }
    Ok((kept, pruned))
}

/// Sort proposals by descending score; ties by subject, object, then
/// predicate declaration order, so that selections are reproducible.
pub(crate) fn sort_by_rank(proposals: &mut [ScoredTriplet], onto: &Ontology) {
    proposals.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.subject.cmp(&b.subject))
            .then_with(|| a.object.cmp(&b.object))
            .then_with(|| {
                onto.predicate_index(&a.predicate)
                    .cmp(&onto.predicate_index(&b.predicate))
            })
    });
}

/// The assertion footprint of a proposal: the triplet itself plus its
/// inverse/symmetric counterparts. Accepting a proposal claims every
/// binding in its footprint, because entailment makes them the same fact.
fn footprint(
    proposal: &ScoredTriplet,
    onto: &Ontology,
) -> Result<Vec<(ObjectId, String, ObjectId)>, OntologyError> {
    let pred = onto
        .predicate(&proposal.predicate)
        .ok_or_else(|| OntologyError::UnknownPredicate(proposal.predicate.clone()))?;
    let mut out = vec![(
        proposal.subject,
        proposal.predicate.clone(),
        proposal.object,
    )];
    if let Some(q) = &pred.inverse_of {
        out.push((proposal.object, q.clone(), proposal.subject));
    }
    if pred.symmetric {
        out.push((
            proposal.object,
            proposal.predicate.clone(),
            proposal.subject,
        ));
    }
    Ok(out)
}

/// Greedy scan in score order: accept each proposal unless it contradicts a
/// functional or inverse-functional constraint already claimed by an
/// accepted proposal, considering inverse and symmetric counterparts as the
/// same assertion.
pub fn axiom_prune(
    proposals: &[ScoredTriplet],
    onto: &Ontology,
) -> Result<FilterOutcome, OntologyError> {
    let mut ranked = proposals.to_vec();
    sort_by_rank(&mut ranked, onto);

    let mut accepted = Vec::new();
    let mut pruned = Vec::new();
    // (subject, predicate) -> object for functional predicates
    let mut one_object: HashMap<(ObjectId, String), ObjectId> = HashMap::new();
    // (predicate, object) -> subject for inverse-functional predicates
    let mut one_subject: HashMap<(String, ObjectId), ObjectId> = HashMap::new();

    'proposals: for proposal in ranked {
        let bindings = footprint(&proposal, onto)?;
        for (s, p, o) in &bindings {
            let def = onto
                .predicate(p)
                .ok_or_else(|| OntologyError::UnknownPredicate(p.clone()))?;
            if def.functional {
                if let Some(existing) = one_object.get(&(*s, p.clone())) {
                    if existing != o {
                        pruned.push((proposal, PruneReason::Functional));
                        continue 'proposals;
                    }
                }
            }
            if def.inverse_functional {
                if let Some(existing) = one_subject.get(&(p.clone(), *o)) {
                    if existing != s {
                        pruned.push((proposal, PruneReason::InverseFunctional));
                        continue 'proposals;
                    }
                }
            }
        }
        for (s, p, o) in bindings {
            let def = onto.predicate(&p).expect("checked above");
            if def.functional {
                one_object.insert((s, p.clone()), o);
            }
            if def.inverse_functional {
                one_subject.insert((p, o), s);
            }
        }
        accepted.push(proposal);
    }

    Ok((accepted, pruned))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn onto() -> Ontology {
        Ontology::parse(
            r#"{
                "classes": [
                    {"name": "Person"},
                    {"name": "Chair"},
                    {"name": "Table"},
                    {"name": "Cup"}
                ],
                "predicates": [
                    {"name": "sitting on", "domain": {"class": "Person"}, "range": {"class": "Chair"},
                     "functional": true, "inverse_functional": true},
                    {"name": "on top of", "domain": {"class": "Cup"}, "range": {"class": "Table"},
                     "functional": true, "inverse_of": "below"},
                    {"name": "below", "domain": {"class": "Table"}, "range": {"class": "Cup"}},
                    {"name": "next to",
                     "domain": {"or": [{"class": "Person"}, {"class": "Chair"}, {"class": "Table"}, {"class": "Cup"}]},
                     "range": {"or": [{"class": "Person"}, {"class": "Chair"}, {"class": "Table"}, {"class": "Cup"}]},
                     "symmetric": true}
                ]
            }"#,
        )
        .unwrap()
    }

    fn classes() -> IndexMap<ObjectId, &'static str> {
        // 0: person, 1: chair, 2: chair, 3: cup, 4: table
        [
            (0, "Person"),
            (1, "Chair"),
            (2, "Chair"),
            (3, "Cup"),
            (4, "Table"),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn tensor_filter_drops_illegal_proposals() {
        let onto = onto();
        let tensor = ConstraintTensor::build(&onto);
        let proposals = vec![
            ScoredTriplet::new(0, "sitting on", 1, 0.9),
            ScoredTriplet::new(3, "sitting on", 4, 0.8), // cup sitting on table
        ];
        let (kept, pruned) = tensor_filter(&proposals, &tensor, &classes()).unwrap();
        assert_eq!(kept.len(), 1);
        assert_eq!(pruned.len(), 1);
        assert_eq!(pruned[0].1, PruneReason::DomainRange);
    }

    #[test]
    fn tensor_filter_empty_input() {
        let onto = onto();
        let tensor = ConstraintTensor::build(&onto);
        let (kept, pruned) = tensor_filter(&[], &tensor, &classes()).unwrap();
        assert!(kept.is_empty());
        assert!(pruned.is_empty());
    }

    #[test]
    fn functional_conflict_keeps_highest() {
        let onto = onto();
        let proposals = vec![
            ScoredTriplet::new(0, "sitting on", 1, 0.78),
            ScoredTriplet::new(0, "sitting on", 2, -0.4),
        ];
        let (accepted, pruned) = axiom_prune(&proposals, &onto).unwrap();
        assert_eq!(accepted.len(), 1);
        assert_eq!(accepted[0].object, 1);
        assert_eq!(pruned.len(), 1);
        assert_eq!(pruned[0].0.object, 2);
        assert_eq!(pruned[0].1, PruneReason::Functional);
    }

    #[test]
    fn single_proposal_is_accepted() {
        let onto = onto();
        let proposals = vec![ScoredTriplet::new(0, "sitting on", 1, 0.1)];
        let (accepted, pruned) = axiom_prune(&proposals, &onto).unwrap();
        assert_eq!(accepted.len(), 1);
        assert!(pruned.is_empty());
    }

    #[test]
    fn unsorted_input_is_sorted_defensively() {
        let onto = onto();
        let proposals = vec![
            ScoredTriplet::new(0, "sitting on", 2, -0.4),
            ScoredTriplet::new(0, "sitting on", 1, 0.78),
        ];
        let (accepted, _) = axiom_prune(&proposals, &onto).unwrap();
        assert_eq!(accepted[0].object, 1);
    }

    #[test]
    fn inverse_functional_conflict_detected() {
        let onto = onto();
        // two persons on the same chair
        let proposals = vec![
            ScoredTriplet::new(0, "sitting on", 1, 0.9),
            ScoredTriplet::new(2, "sitting on", 1, 0.5),
        ];
        let (accepted, pruned) = axiom_prune(&proposals, &onto).unwrap();
        assert_eq!(accepted.len(), 1);
        assert_eq!(pruned[0].1, PruneReason::InverseFunctional);
    }

    #[test]
    fn conflict_through_inverse_predicate() {
        let onto = onto();
        // (3 on top of 4) claims the functional binding (3, on top of).
        // (1 below 3) entails (3 on top of 1), so it must hit that binding
        // even though it is phrased through the inverse predicate.
        let proposals = vec![
            ScoredTriplet::new(3, "on top of", 4, 0.9),
            ScoredTriplet::new(1, "below", 3, 0.5),
        ];
        let (accepted, pruned) = axiom_prune(&proposals, &onto).unwrap();
        assert_eq!(accepted.len(), 1);
        assert_eq!(pruned.len(), 1);
        assert_eq!(pruned[0].1, PruneReason::Functional);
    }

    #[test]
    fn symmetric_footprint_blocks_reversed_duplicate_conflicts() {
        let onto = Ontology::parse(
            r#"{"classes": [{"name": "A"}],
                "predicates": [{"name": "paired with", "domain": {"class": "A"}, "range": {"class": "A"},
                                "symmetric": true, "functional": true}]}"#,
        )
        .unwrap();
        let proposals = vec![
            ScoredTriplet::new(0, "paired with", 1, 0.9),
            // entails (1 paired with 0) and (2 paired with 1): the latter
            // clashes with the implied (1 paired with 0) binding
            ScoredTriplet::new(1, "paired with", 2, 0.5),
        ];
        let (accepted, pruned) = axiom_prune(&proposals, &onto).unwrap();
        assert_eq!(accepted.len(), 1);
        assert_eq!(pruned.len(), 1);
    }

    #[test]
    fn translation_invariance_of_pruning() {
        let onto = onto();
        let proposals = vec![
            ScoredTriplet::new(0, "sitting on", 1, 0.78),
            ScoredTriplet::new(0, "sitting on", 2, -0.4),
            ScoredTriplet::new(3, "on top of", 4, 0.3),
        ];
        let shifted: Vec<ScoredTriplet> = proposals
            .iter()
            .map(|p| ScoredTriplet::new(p.subject, p.predicate.clone(), p.object, p.score + 100.0))
            .collect();
        let (a1, p1) = axiom_prune(&proposals, &onto).unwrap();
        let (a2, p2) = axiom_prune(&shifted, &onto).unwrap();
        let key = |t: &ScoredTriplet| (t.subject, t.predicate.clone(), t.object);
        assert_eq!(
            a1.iter().map(key).collect::<Vec<_>>(),
            a2.iter().map(key).collect::<Vec<_>>()
        );
        assert_eq!(p1.len(), p2.len());
    }
}
