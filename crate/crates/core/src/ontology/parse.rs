//! Parsing and serialization of the compact ontology file format.
//!
//! The format is a single JSON document:
//!
//! ```json
//! { "classes":    [ {"name": "Chair", "parents": ["Furniture"]} ],
//!   "predicates": [ {"name": "sitting on",
//!                    "domain": {"class": "Person"},
//!                    "range":  {"class": "Chair"},
//!                    "functional": true, "inverse_functional": true,
//!                    "symmetric": false, "transitive": false} ] }
//! ```
//!
//! Class expressions are `{"class": NAME}`, `{"and": [...]}`, `{"or": [...]}`
//! or `{"not": expr}`. Axiom flags default to false and `inverse_of` to
//! absent.

use super::{ClassDef, ClassExpr, Ontology, OntologyError, PredicateDef};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Serialize, Deserialize)]
struct OntologyDoc {
    #[serde(default)]
    classes: Vec<ClassDoc>,
    #[serde(default)]
    predicates: Vec<PredicateDoc>,
}

#[derive(Serialize, Deserialize)]
struct ClassDoc {
    name: String,
    #[serde(default)]
    parents: BTreeSet<String>,
}

#[derive(Serialize, Deserialize)]
struct PredicateDoc {
    name: String,
    domain: ClassExpr,
    range: ClassExpr,
    #[serde(default)]
    functional: bool,
    #[serde(default)]
    inverse_functional: bool,
    #[serde(default)]
    symmetric: bool,
    #[serde(default)]
    transitive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverse_of: Option<String>,
}

pub(super) fn parse(text: &str) -> Result<Ontology, OntologyError> {
    let doc: OntologyDoc = serde_json::from_str(text).map_err(|e| OntologyError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut classes: IndexMap<String, ClassDef> = IndexMap::new();
    for class in doc.classes {
        if class.name.trim().is_empty() {
            return Err(OntologyError::MalformedName(
                class.name,
                "class names must be non-empty".into(),
            ));
        }
        let def = ClassDef {
            name: class.name.clone(),
            parents: class.parents,
        };
        if classes.insert(class.name.clone(), def).is_some() {
            return Err(OntologyError::DuplicateClass(class.name));
        }
    }

    // every parent must be declared
    for def in classes.values() {
        for parent in &def.parents {
            if !classes.contains_key(parent) {
                return Err(OntologyError::UnknownClass(parent.clone()));
            }
        }
    }
    check_acyclic(&classes)?;

    let mut predicates: IndexMap<String, PredicateDef> = IndexMap::new();
    for pred in doc.predicates {
        if pred.name.trim().is_empty() {
            return Err(OntologyError::MalformedName(
                pred.name,
                "predicate names must be non-empty".into(),
            ));
        }
        check_expr(&pred.name, &pred.domain, &classes)?;
        check_expr(&pred.name, &pred.range, &classes)?;
        let def = PredicateDef {
            name: pred.name.clone(),
            domain: pred.domain,
            range: pred.range,
            functional: pred.functional,
            inverse_functional: pred.inverse_functional,
            symmetric: pred.symmetric,
            transitive: pred.transitive,
            inverse_of: pred.inverse_of,
        };
        if predicates.insert(pred.name.clone(), def).is_some() {
            return Err(OntologyError::DuplicatePredicate(pred.name));
        }
    }

    resolve_inverses(&mut predicates)?;

    Ok(Ontology::from_parts(classes, predicates))
}

fn check_expr(
    predicate: &str,
    expr: &ClassExpr,
    classes: &IndexMap<String, ClassDef>,
) -> Result<(), OntologyError> {
    match expr {
        ClassExpr::Named(name) => {
            if !classes.contains_key(name) {
                return Err(OntologyError::UnknownClass(name.clone()));
            }
        }
        ClassExpr::And(items) | ClassExpr::Or(items) => {
            if items.is_empty() {
                return Err(OntologyError::EmptyExpr(predicate.to_string()));
            }
            for item in items {
                check_expr(predicate, item, classes)?;
            }
        }
        ClassExpr::Not(inner) => check_expr(predicate, inner, classes)?,
    }
    Ok(())
}

fn check_acyclic(classes: &IndexMap<String, ClassDef>) -> Result<(), OntologyError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let mut marks: IndexMap<&str, Mark> =
        classes.keys().map(|k| (k.as_str(), Mark::White)).collect();

    fn visit(
        name: &str,
        classes: &IndexMap<String, ClassDef>,
        marks: &mut IndexMap<&str, Mark>,
    ) -> Result<(), OntologyError> {
        match marks[name] {
            Mark::Black => return Ok(()),
            Mark::Grey => return Err(OntologyError::CyclicHierarchy(name.to_string())),
            Mark::White => {}
        }
        *marks.get_mut(name).unwrap() = Mark::Grey;
        for parent in &classes[name].parents {
            visit(parent, classes, marks)?;
        }
        *marks.get_mut(name).unwrap() = Mark::Black;
        Ok(())
    }

    let names: Vec<&str> = classes.keys().map(|k| k.as_str()).collect();
    for name in names {
        visit(name, classes, &mut marks)?;
    }
    Ok(())
}

/// Complete one-sided inverse declarations and reject conflicting ones.
fn resolve_inverses(predicates: &mut IndexMap<String, PredicateDef>) -> Result<(), OntologyError> {
    let declared: Vec<(String, String)> = predicates
        .values()
        .filter_map(|p| p.inverse_of.clone().map(|inv| (p.name.clone(), inv)))
        .collect();

    for (name, inverse) in declared {
        if !predicates.contains_key(&inverse) {
            return Err(OntologyError::UnknownPredicate(inverse));
        }
        if inverse == name && !predicates[&name].symmetric {
            return Err(OntologyError::SelfInverseNotSymmetric(name));
        }
        match &predicates[&inverse].inverse_of {
            None => {
                predicates[&inverse].inverse_of = Some(name);
            }
            Some(back) if *back == name => {}
            Some(back) => {
                return Err(OntologyError::InverseConflict {
                    predicate: name,
                    declared: inverse.clone(),
                    conflicting: back.clone(),
                });
            }
        }
    }
    Ok(())
}

pub(super) fn serialize(onto: &Ontology) -> String {
    let doc = OntologyDoc {
        classes: onto
            .classes()
            .map(|c| ClassDoc {
                name: c.name.clone(),
                parents: c.parents.clone(),
            })
            .collect(),
        predicates: onto
            .predicates()
            .map(|p| PredicateDoc {
                name: p.name.clone(),
                domain: p.domain.clone(),
                range: p.range.clone(),
                functional: p.functional,
                inverse_functional: p.inverse_functional,
                symmetric: p.symmetric,
                transitive: p.transitive,
                inverse_of: p.inverse_of.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("ontology serialization cannot fail")
}
