//! Ontology-guided scene graph tooling.
//!
//! This crate provides the pieces needed to wrap an external scene-graph
//! scorer with ontology-founded reasoning:
//!
//! - [`ontology`]: a compact ontology format (class hierarchy plus predicate
//!   axioms), class-expression evaluation and validation.
//! - [`reasoner`]: inference closure under inverse/symmetric/transitive
//!   axioms, the domain/range constraint tensor and consistency checking.
//! - [`dataset`]: scene-graph dataset ingestion, predicate mapping,
//!   inference-based augmentation, statistics and stratified splitting.
//! - [`postproc`]: axiom-based filtering and Top-K selection of ranked
//!   triplet proposals, plus DOT/text graph emission.
//! - [`metrics`]: the predicate-detection recall suite (R@K, zR@K, mR@K)
//!   under a tunable per-pair graph constraint.
//! - [`baseline`]: a no-ML frequency-prior scorer and the multi-label hinge
//!   loss, so the whole pipeline can run end to end without a network.

pub mod baseline;
pub mod dataset;
pub mod metrics;
pub mod ontology;
pub mod postproc;
pub mod reasoner;
pub mod rng;
