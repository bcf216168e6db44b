//! Ontology data model: class hierarchy, predicate axioms and class
//! expressions.
//!
//! An [`Ontology`] is immutable once parsed; all lookups borrow. The schema
//! deliberately covers only what the pipeline consumes: subclassing, the
//! five predicate axiom families (domain/range, inverse, functional,
//! inverse-functional, symmetric, transitive) and boolean class expressions.

mod parse;
mod validate;

pub use validate::{Diagnostic, Severity};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// A boolean combination of named classes.
///
/// `Named(c)` is satisfied by `c` and every subclass of `c`; `And`/`Or`/`Not`
/// combine member results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassExpr {
    #[serde(rename = "class")]
    Named(String),
    #[serde(rename = "and")]
    And(Vec<ClassExpr>),
    #[serde(rename = "or")]
    Or(Vec<ClassExpr>),
    #[serde(rename = "not")]
    Not(Box<ClassExpr>),
}

impl ClassExpr {
    pub fn named(name: impl Into<String>) -> Self {
        ClassExpr::Named(name.into())
    }

    /// Iterate over every class name mentioned in the expression.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ClassExpr::Named(name) => out.push(name),
            ClassExpr::And(items) | ClassExpr::Or(items) => {
                for item in items {
                    item.collect_leaves(out);
                }
            }
            ClassExpr::Not(inner) => inner.collect_leaves(out),
        }
    }
}

/// A declared object class and its direct parents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub name: String,
    pub parents: BTreeSet<String>,
}

/// A declared predicate with its axiom flags and domain/range expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct PredicateDef {
    pub name: String,
    pub domain: ClassExpr,
    pub range: ClassExpr,
    pub functional: bool,
    pub inverse_functional: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub inverse_of: Option<String>,
}

/// Errors raised while parsing or querying an ontology.
#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("duplicate class `{0}`")]
    DuplicateClass(String),
    #[error("duplicate predicate `{0}`")]
    DuplicatePredicate(String),
    #[error("class `{0}` has an empty name or is otherwise malformed: {1}")]
    MalformedName(String, String),
    #[error("cyclic class hierarchy involving `{0}`")]
    CyclicHierarchy(String),
    #[error("predicate `{predicate}` declares inverse `{declared}` but `{declared}` declares inverse `{conflicting}`")]
    InverseConflict {
        predicate: String,
        declared: String,
        conflicting: String,
    },
    #[error("predicate `{0}` is its own inverse but is not symmetric")]
    SelfInverseNotSymmetric(String),
    #[error("empty `and`/`or` expression in predicate `{0}`")]
    EmptyExpr(String),
}

/// A parsed, fully resolved ontology.
///
/// Class and predicate maps preserve declaration order, which also fixes the
/// index assignment used by the constraint tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Ontology {
    classes: IndexMap<String, ClassDef>,
    predicates: IndexMap<String, PredicateDef>,
}

impl Ontology {
    /// Parse the compact ontology file format.
    ///
    /// One-sided `inverse_of` declarations are completed so that inversion is
    /// always mutual in the returned ontology.
    pub fn parse(text: &str) -> Result<Self, OntologyError> {
        parse::parse(text)
    }

    /// Serialize back to the file format. Parsing the output yields an equal
    /// ontology, and re-serializing that yields identical bytes.
    pub fn to_json_string(&self) -> String {
        parse::serialize(self)
    }

    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.get(name)
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateDef> {
        self.predicates.get(name)
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassDef> {
        self.classes.values()
    }

    pub fn predicates(&self) -> impl Iterator<Item = &PredicateDef> {
        self.predicates.values()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn predicate_count(&self) -> usize {
        self.predicates.len()
    }

    /// Declaration index of a predicate, used as a deterministic tie-break
    /// key when ranking proposals.
    pub fn predicate_index(&self, name: &str) -> Option<usize> {
        self.predicates.get_index_of(name)
    }

    /// True iff `ancestor` is reachable from `child` following parent links,
    /// or `child == ancestor`.
    pub fn is_subclass_of(&self, child: &str, ancestor: &str) -> Result<bool, OntologyError> {
        if !self.classes.contains_key(ancestor) {
            return Err(OntologyError::UnknownClass(ancestor.to_string()));
        }
        let mut stack = vec![child];
        let mut seen = BTreeSet::new();
        while let Some(current) = stack.pop() {
            let def = self
                .classes
                .get(current)
                .ok_or_else(|| OntologyError::UnknownClass(current.to_string()))?;
            if current == ancestor {
                return Ok(true);
            }
            for parent in &def.parents {
                if seen.insert(parent.as_str()) {
                    stack.push(parent);
                }
            }
        }
        Ok(false)
    }

    /// Evaluate a class expression against a declared class.
    pub fn eval_expr(&self, expr: &ClassExpr, class: &str) -> Result<bool, OntologyError> {
        match expr {
            ClassExpr::Named(name) => self.is_subclass_of(class, name),
            ClassExpr::And(items) => {
                for item in items {
                    if !self.eval_expr(item, class)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            ClassExpr::Or(items) => {
                for item in items {
                    if self.eval_expr(item, class)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            ClassExpr::Not(inner) => Ok(!self.eval_expr(inner, class)?),
        }
    }

    /// Run the diagnostic checks; see [`validate::validate`].
    pub fn validate(&self) -> Vec<Diagnostic> {
        validate::validate(self)
    }

    pub(crate) fn from_parts(
        classes: IndexMap<String, ClassDef>,
        predicates: IndexMap<String, PredicateDef>,
    ) -> Self {
        Ontology {
            classes,
            predicates,
        }
    }
}
