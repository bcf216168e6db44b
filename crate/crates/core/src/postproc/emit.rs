//! Rendering of selection results as DOT or plain-text scene graphs.

use super::SelectionResult;
use crate::dataset::SceneGraph;
use crate::reasoner::{ObjectId, Provenance, TripletSet};
use std::collections::BTreeSet;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Dot,
    Text,
}

/// Materialize a selection as a scene graph over the original objects:
/// accepted triplets become asserted, implicit ones keep their inferred
/// provenance. Useful for consistency checks on emitted output.
pub fn selection_to_graph(result: &SelectionResult, base: &SceneGraph) -> SceneGraph {
    let mut triplets = TripletSet::new();
    for accepted in &result.accepted {
        triplets.insert(accepted.triplet(), Provenance::Asserted);
    }
    for implicit in &result.implicit {
        triplets.insert(
            implicit.triplet.clone(),
            Provenance::Inferred {
                axiom: implicit.axiom,
                sources: implicit.sources.clone(),
            },
        );
    }
    SceneGraph {
        triplets,
        ..base.clone()
    }
}

/// Render the selection. DOT output labels nodes `class_id` and draws
/// implicit edges dashed; text output lists one `subject --predicate-->
/// object` line per triplet, accepted first in descending score order,
/// then implicits.
pub fn emit_graph(result: &SelectionResult, graph: &SceneGraph, format: EmitFormat) -> String {
    match format {
        EmitFormat::Dot => emit_dot(result, graph),
        EmitFormat::Text => emit_text(result, graph),
    }
}

fn node_label(graph: &SceneGraph, id: ObjectId) -> String {
    let class = graph
        .objects
        .iter()
        .find(|o| o.id == id)
        .map(|o| o.class_name.as_str())
        .unwrap_or("unknown");
    format!("{class}_{id}")
}

fn emit_dot(result: &SelectionResult, graph: &SceneGraph) -> String {
    let mut participating: BTreeSet<ObjectId> = BTreeSet::new();
    for t in &result.accepted {
        participating.insert(t.subject);
        participating.insert(t.object);
    }
    for t in &result.implicit {
        participating.insert(t.triplet.subject);
        participating.insert(t.triplet.object);
    }

    let mut out = String::new();
    writeln!(out, "digraph scene {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for id in &participating {
        writeln!(
            out,
            "  n{id} [label=\"{}\"];",
            escape(&node_label(graph, *id))
        )
        .unwrap();
    }
    for t in &result.accepted {
        writeln!(
            out,
            "  n{} -> n{} [label=\"{}\"];",
            t.subject,
            t.object,
            escape(&t.predicate)
        )
        .unwrap();
    }
    for t in &result.implicit {
        writeln!(
            out,
            "  n{} -> n{} [label=\"{}\", style=dashed];",
            t.triplet.subject,
            t.triplet.object,
            escape(&t.triplet.predicate)
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

fn emit_text(result: &SelectionResult, graph: &SceneGraph) -> String {
    let mut out = String::new();
    for t in &result.accepted {
        writeln!(
            out,
            "{} --{}--> {}",
            node_label(graph, t.subject),
            t.predicate,
            node_label(graph, t.object)
        )
        .unwrap();
    }
    for t in &result.implicit {
        writeln!(
            out,
            "{} --{}--> {} (implicit)",
            node_label(graph, t.triplet.subject),
            t.triplet.predicate,
            node_label(graph, t.triplet.object)
        )
        .unwrap();
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
