//! Axiom lint over a scene graph: domain/range, functional and
//! inverse-functional violations.

use super::{ConstraintTensor, ObjectId, Triplet};
use crate::dataset::SceneGraph;
use crate::ontology::{Ontology, OntologyError};
use serde::Serialize;
use std::collections::BTreeMap;

/// One detected axiom violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The triplet's class pair is not compatible with the predicate's
    /// domain/range.
    DomainRange {
        triplet: Triplet,
        subject_class: String,
        object_class: String,
    },
    /// A functional predicate relates one subject to several objects.
    Functional {
        subject: ObjectId,
        predicate: String,
        objects: Vec<ObjectId>,
    },
    /// An inverse-functional predicate relates several subjects to one
    /// object.
    InverseFunctional {
        object: ObjectId,
        predicate: String,
        subjects: Vec<ObjectId>,
    },
}

/// Check every triplet of `graph` against the ontology axioms.
///
/// Violations are reported, never repaired: the caller decides whether a
/// ground-truth lint failure or an inference conflict is fatal.
pub fn check_consistency(
    onto: &Ontology,
    tensor: &ConstraintTensor,
    graph: &SceneGraph,
) -> Result<Vec<Violation>, OntologyError> {
    let classes = graph.class_map();
    let mut violations = Vec::new();

    // domain/range per triplet
    for t in graph.triplets.triplets() {
        let subject_class = classes
            .get(&t.subject)
            .ok_or_else(|| OntologyError::UnknownClass(format!("object #{}", t.subject)))?;
        let object_class = classes
            .get(&t.object)
            .ok_or_else(|| OntologyError::UnknownClass(format!("object #{}", t.object)))?;
        if !tensor.allowed(subject_class, object_class, &t.predicate)? {
            violations.push(Violation::DomainRange {
                triplet: t.clone(),
                subject_class: (*subject_class).to_string(),
                object_class: (*object_class).to_string(),
            });
        }
    }

    // functional: group by (subject, predicate)
    let mut by_subject: BTreeMap<(ObjectId, &str), Vec<ObjectId>> = BTreeMap::new();
    let mut by_object: BTreeMap<(&str, ObjectId), Vec<ObjectId>> = BTreeMap::new();
    for t in graph.triplets.triplets() {
        let pred = onto
            .predicate(&t.predicate)
            .ok_or_else(|| OntologyError::UnknownPredicate(t.predicate.clone()))?;
        if pred.functional {
            by_subject
                .entry((t.subject, &t.predicate))
                .or_default()
                .push(t.object);
        }
        if pred.inverse_functional {
            by_object
                .entry((&t.predicate, t.object))
                .or_default()
                .push(t.subject);
        }
    }
    for ((subject, predicate), objects) in by_subject {
        if objects.len() > 1 {
            violations.push(Violation::Functional {
                subject,
                predicate: predicate.to_string(),
                objects,
            });
        }
    }
    for ((predicate, object), subjects) in by_object {
        if subjects.len() > 1 {
            violations.push(Violation::InverseFunctional {
                object,
                predicate: predicate.to_string(),
                subjects,
            });
        }
    }

    Ok(violations)
}
