//! Domain/range legality tensor.
//!
//! A boolean array over (subject class, object class, predicate). The
//! predicate axis varies fastest so that all predicate bits for a given
//! class pair sit in one contiguous run.

use crate::ontology::{Ontology, OntologyError};
use indexmap::IndexMap;

/// Precomputed domain/range compatibility for every
/// (subject class, object class, predicate) combination.
#[derive(Debug, Clone)]
pub struct ConstraintTensor {
    class_index: IndexMap<String, usize>,
    predicate_index: IndexMap<String, usize>,
    bits: Vec<bool>,
}

impl ConstraintTensor {
    /// Build the tensor by evaluating every predicate's domain expression
    /// against every class and conjoining with the range side.
    pub fn build(onto: &Ontology) -> ConstraintTensor {
        let class_index: IndexMap<String, usize> = onto
            .classes()
            .enumerate()
            .map(|(i, c)| (c.name.clone(), i))
            .collect();
        let predicate_index: IndexMap<String, usize> = onto
            .predicates()
            .enumerate()
            .map(|(i, p)| (p.name.clone(), i))
            .collect();

        let nc = class_index.len();
        let np = predicate_index.len();

        // evaluate each expression once per class, then combine
        let mut domain_ok = vec![false; nc * np];
        let mut range_ok = vec![false; nc * np];
        for (pi, pred) in onto.predicates().enumerate() {
            for (ci, class) in onto.classes().enumerate() {
                domain_ok[ci * np + pi] = onto
                    .eval_expr(&pred.domain, &class.name)
                    .expect("parser guarantees expression leaves resolve");
                range_ok[ci * np + pi] = onto
                    .eval_expr(&pred.range, &class.name)
                    .expect("parser guarantees expression leaves resolve");
            }
        }

        let mut bits = vec![false; nc * nc * np];
        for subj in 0..nc {
            for obj in 0..nc {
                for pred in 0..np {
                    bits[(subj * nc + obj) * np + pred] =
                        domain_ok[subj * np + pred] && range_ok[obj * np + pred];
                }
            }
        }

        ConstraintTensor {
            class_index,
            predicate_index,
            bits,
        }
    }

    /// Look up the legality bit for a (subject class, object class,
    /// predicate) combination.
    pub fn allowed(
        &self,
        subject_class: &str,
        object_class: &str,
        predicate: &str,
    ) -> Result<bool, OntologyError> {
        let subj = *self
            .class_index
            .get(subject_class)
            .ok_or_else(|| OntologyError::UnknownClass(subject_class.to_string()))?;
        let obj = *self
            .class_index
            .get(object_class)
            .ok_or_else(|| OntologyError::UnknownClass(object_class.to_string()))?;
        let pred = *self
            .predicate_index
            .get(predicate)
            .ok_or_else(|| OntologyError::UnknownPredicate(predicate.to_string()))?;
        let nc = self.class_index.len();
        let np = self.predicate_index.len();
        Ok(self.bits[(subj * nc + obj) * np + pred])
    }

    pub fn class_names(&self) -> impl Iterator<Item = &str> {
        self.class_index.keys().map(|s| s.as_str())
    }

    pub fn predicate_names(&self) -> impl Iterator<Item = &str> {
        self.predicate_index.keys().map(|s| s.as_str())
    }

    /// Rows of `(subject class, object class, predicate, allowed)` in index
    /// order, for the debug dump.
    pub fn rows(&self) -> impl Iterator<Item = (&str, &str, &str, bool)> {
        let nc = self.class_index.len();
        let np = self.predicate_index.len();
        self.class_index
            .keys()
            .enumerate()
            .flat_map(move |(si, s)| {
                self.class_index
                    .keys()
                    .enumerate()
                    .flat_map(move |(oi, o)| {
                        self.predicate_index.keys().enumerate().map(move |(pi, p)| {
                            let _ = nc;
                            (
                                s.as_str(),
                                o.as_str(),
                                p.as_str(),
                                self.bits[(si * nc + oi) * np + pi],
                            )
                        })
                    })
            })
    }
}
