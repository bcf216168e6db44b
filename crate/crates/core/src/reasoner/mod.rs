//! Axiom-based reasoning over relation triplets: inference closure,
//! the domain/range constraint tensor and consistency checking.

mod closure;
mod consistency;
mod tensor;

pub use closure::inference_closure;
pub use consistency::{check_consistency, Violation};
pub use tensor::ConstraintTensor;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

/// Per-image object identifier.
pub type ObjectId = u32;

/// An asserted or inferred relation between two distinct objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triplet {
    pub subject: ObjectId,
    pub predicate: String,
    pub object: ObjectId,
}

impl Triplet {
    pub fn new(subject: ObjectId, predicate: impl Into<String>, object: ObjectId) -> Self {
        Triplet {
            subject,
            predicate: predicate.into(),
            object,
        }
    }
}

/// Which axiom produced an inferred triplet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomKind {
    InverseOf,
    Symmetric,
    Transitive,
}

/// Origin of a triplet in a [`TripletSet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Asserted,
    Inferred {
        axiom: AxiomKind,
        sources: Vec<Triplet>,
    },
}

impl Provenance {
    pub fn is_asserted(&self) -> bool {
        matches!(self, Provenance::Asserted)
    }
}

/// An ordered, duplicate-free set of triplets with per-triplet provenance.
///
/// Iteration order is insertion order, which keeps closure output and
/// serialized datasets deterministic.
#[derive(Debug, Clone, Default)]
pub struct TripletSet {
    entries: IndexMap<Triplet, Provenance>,
}

impl TripletSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build a set of asserted triplets, dropping duplicates. Returns the
    /// set and the number of duplicates dropped.
    pub fn from_asserted<I: IntoIterator<Item = Triplet>>(triplets: I) -> (Self, usize) {
        let mut set = TripletSet::new();
        let mut dropped = 0;
        for t in triplets {
            if !set.insert(t, Provenance::Asserted) {
                dropped += 1;
            }
        }
        (set, dropped)
    }

    /// Insert a triplet. Returns false when it was already present; the
    /// existing provenance wins.
    pub fn insert(&mut self, triplet: Triplet, provenance: Provenance) -> bool {
        debug_assert_ne!(triplet.subject, triplet.object);
        match self.entries.entry(triplet) {
            indexmap::map::Entry::Occupied(_) => false,
            indexmap::map::Entry::Vacant(slot) => {
                slot.insert(provenance);
                true
            }
        }
    }

    pub fn contains(&self, triplet: &Triplet) -> bool {
        self.entries.contains_key(triplet)
    }

    pub fn provenance(&self, triplet: &Triplet) -> Option<&Provenance> {
        self.entries.get(triplet)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Triplet, &Provenance)> {
        self.entries.iter()
    }

    pub fn triplets(&self) -> impl Iterator<Item = &Triplet> {
        self.entries.keys()
    }

    /// Triplets in insertion order, cloned.
    pub fn to_vec(&self) -> Vec<Triplet> {
        self.entries.keys().cloned().collect()
    }

    pub fn is_subset_of(&self, other: &TripletSet) -> bool {
        self.entries.keys().all(|t| other.contains(t))
    }
}

impl PartialEq for TripletSet {
    /// Equality over membership, ignoring insertion order and provenance.
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.is_subset_of(other)
    }
}

impl Eq for TripletSet {}

impl FromIterator<Triplet> for TripletSet {
    fn from_iter<I: IntoIterator<Item = Triplet>>(iter: I) -> Self {
        TripletSet::from_asserted(iter).0
    }
}
