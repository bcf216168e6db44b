//! Least fixed point of a triplet set under inverse, symmetric and
//! transitive predicate axioms.

use super::{AxiomKind, Provenance, Triplet, TripletSet};
use crate::ontology::{Ontology, OntologyError};
use std::collections::VecDeque;

/// Compute the inference closure of `asserted`.
///
/// Rules applied until no new triplet appears:
/// - inverse: `(s, p, o)` yields `(o, q, s)` when `q` is `p`'s inverse;
/// - symmetry: `(s, p, o)` yields `(o, p, s)` when `p` is symmetric;
/// - transitivity: `(s, p, o)` and `(o, p, t)` yield `(s, p, t)` when `p`
///   is transitive and `s != t`.
///
/// Input provenance is preserved; every new triplet records the axiom and
/// the triplets that generated it. Output order is deterministic: input
/// order first, then discovery order of a FIFO worklist. Self-relations are
/// never produced, so cyclic transitive chains terminate.
pub fn inference_closure(
    onto: &Ontology,
    asserted: &TripletSet,
) -> Result<TripletSet, OntologyError> {
    for t in asserted.triplets() {
        if onto.predicate(&t.predicate).is_none() {
            return Err(OntologyError::UnknownPredicate(t.predicate.clone()));
        }
    }

    let mut out = TripletSet::new();
    let mut queue: VecDeque<Triplet> = VecDeque::new();
    for (t, prov) in asserted.iter() {
        out.insert(t.clone(), prov.clone());
        queue.push_back(t.clone());
    }

    while let Some(t) = queue.pop_front() {
        let pred = onto
            .predicate(&t.predicate)
            .expect("predicates validated above");
        let mut candidates: Vec<(Triplet, AxiomKind, Vec<Triplet>)> = Vec::new();

        if let Some(q) = &pred.inverse_of {
            candidates.push((
                Triplet::new(t.object, q.clone(), t.subject),
                AxiomKind::InverseOf,
                vec![t.clone()],
            ));
        }
        if pred.symmetric {
            candidates.push((
                Triplet::new(t.object, t.predicate.clone(), t.subject),
                AxiomKind::Symmetric,
                vec![t.clone()],
            ));
        }
        if pred.transitive {
            // join the new triplet against everything already derived
            let existing: Vec<Triplet> = out
                .triplets()
                .filter(|e| e.predicate == t.predicate)
                .cloned()
                .collect();
            for e in existing {
                if e.subject == t.object && e.object != t.subject {
                    candidates.push((
                        Triplet::new(t.subject, t.predicate.clone(), e.object),
                        AxiomKind::Transitive,
                        vec![t.clone(), e.clone()],
                    ));
                }
                if e.object == t.subject && t.object != e.subject {
                    candidates.push((
                        Triplet::new(e.subject, t.predicate.clone(), t.object),
                        AxiomKind::Transitive,
                        vec![e.clone(), t.clone()],
                    ));
                }
            }
        }

        for (candidate, axiom, sources) in candidates {
            if candidate.subject == candidate.object || out.contains(&candidate) {
                continue;
            }
            out.insert(candidate.clone(), Provenance::Inferred { axiom, sources });
            queue.push_back(candidate);
        }
    }

    Ok(out)
}
