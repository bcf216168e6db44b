//! Ontology-guided post-processing of externally produced triplet rankings:
//! domain/range filtering, greedy axiom-based pruning, Top-K selection under
//! a per-pair graph constraint, implicit-triplet expansion and graph
//! emission.

mod emit;
mod io;
mod prune;
mod select;

pub use emit::{emit_graph, selection_to_graph, EmitFormat};
pub use io::{load_scores, save_scores, ImageScores, ScoresError};
pub use prune::{axiom_prune, tensor_filter, FilterOutcome};
pub use select::{select_top, SelectError};

use crate::reasoner::{AxiomKind, ObjectId, Triplet};
use serde::{Deserialize, Serialize};

/// One ranked triplet proposal from a scorer. Scores are unbounded reals
/// with no semantics beyond comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredTriplet {
    pub subject: ObjectId,
    pub predicate: String,
    pub object: ObjectId,
    pub score: f64,
}

impl ScoredTriplet {
    pub fn new(
        subject: ObjectId,
        predicate: impl Into<String>,
        object: ObjectId,
        score: f64,
    ) -> Self {
        ScoredTriplet {
            subject,
            predicate: predicate.into(),
            object,
            score,
        }
    }

    pub fn triplet(&self) -> Triplet {
        Triplet::new(self.subject, self.predicate.clone(), self.object)
    }
}

/// Why a proposal was pruned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneReason {
    DomainRange,
    Functional,
    InverseFunctional,
}

/// Knobs for [`select_top`].
#[derive(Debug, Clone)]
pub struct SelectionConfig {
    /// K: how many explicit triplets the emitted graph may contain.
    pub top_k: usize,
    /// k: how many highest-scoring predicates to keep per ordered object
    /// pair. Values above the predicate count behave like the predicate
    /// count.
    pub graph_constraint: usize,
    pub apply_tensor_filter: bool,
    pub apply_axiom_pruning: bool,
    pub expand_implicit: bool,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            top_k: 16,
            graph_constraint: 1,
            apply_tensor_filter: true,
            apply_axiom_pruning: true,
            expand_implicit: true,
        }
    }
}

/// A triplet entailed by accepted triplets rather than proposed directly.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitTriplet {
    pub triplet: Triplet,
    /// Display score inherited from the accepted triplet whose addition
    /// derived it.
    pub score: f64,
    pub axiom: AxiomKind,
    pub sources: Vec<Triplet>,
}

/// An entailed triplet that clashes with a functional constraint of the
/// accepted set. The generating triplet stays accepted; the clash is
/// surfaced instead of silently resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitConflict {
    pub implicit: Triplet,
    pub conflicts_with: Triplet,
    pub kind: PruneReason,
}

/// Output of [`select_top`].
#[derive(Debug, Clone, Default)]
pub struct SelectionResult {
    /// Explicitly selected proposals, descending score.
    pub accepted: Vec<ScoredTriplet>,
    /// Entailed triplets; they never consume Top-K budget.
    pub implicit: Vec<ImplicitTriplet>,
    /// Proposals removed by the tensor filter or axiom pruning.
    pub pruned: Vec<(ScoredTriplet, PruneReason)>,
    /// Entailment clashes detected while expanding implicits.
    pub implicit_conflicts: Vec<ImplicitConflict>,
}
