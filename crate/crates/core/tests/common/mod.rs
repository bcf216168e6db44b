//! Shared fixture generators and independent oracles for the integration
//! suites. Everything here is deliberately written from scratch against the
//! definitions rather than reusing library internals, so it can serve as a
//! cross-check.

#![allow(dead_code)]

use ontoscene::dataset::{SceneGraph, SceneObject};
use ontoscene::ontology::Ontology;
use ontoscene::postproc::ScoredTriplet;
use ontoscene::reasoner::{ObjectId, Triplet, TripletSet};
use ontoscene::rng::SplitMix64;
use std::collections::{BTreeMap, BTreeSet};

// ---------------------------------------------------------------------------
// random ontology generation (as JSON text, exercising the parser)
// ---------------------------------------------------------------------------

pub fn random_expr_json(rng: &mut SplitMix64, classes: &[String], depth: usize) -> String {
    if depth == 0 || rng.next_below(2) == 0 {
        let class = &classes[rng.next_below(classes.len() as u64) as usize];
        return format!("{{\"class\": \"{class}\"}}");
    }
    match rng.next_below(3) {
        0 => {
            let n = 1 + rng.next_below(3) as usize;
            let items: Vec<String> = (0..n)
                .map(|_| random_expr_json(rng, classes, depth - 1))
                .collect();
            format!("{{\"and\": [{}]}}", items.join(", "))
        }
        1 => {
            let n = 1 + rng.next_below(3) as usize;
            let items: Vec<String> = (0..n)
                .map(|_| random_expr_json(rng, classes, depth - 1))
                .collect();
            format!("{{\"or\": [{}]}}", items.join(", "))
        }
        _ => format!("{{\"not\": {}}}", random_expr_json(rng, classes, depth - 1)),
    }
}

/// A random well-formed ontology: acyclic hierarchy (parents only among
/// earlier classes), expression depth capped, mutual inverses.
pub fn random_ontology(
    rng: &mut SplitMix64,
    max_classes: usize,
    max_predicates: usize,
    max_depth: usize,
) -> Ontology {
    let class_count = 2 + rng.next_below((max_classes - 1) as u64) as usize;
    let classes: Vec<String> = (0..class_count).map(|i| format!("C{i}")).collect();

    let mut class_docs = Vec::new();
    for (i, name) in classes.iter().enumerate() {
        let mut parents = BTreeSet::new();
        if i > 0 {
            for _ in 0..rng.next_below(3) {
                parents.insert(classes[rng.next_below(i as u64) as usize].clone());
            }
        }
        let parents_json: Vec<String> = parents.iter().map(|p| format!("\"{p}\"")).collect();
        class_docs.push(format!(
            "{{\"name\": \"{name}\", \"parents\": [{}]}}",
            parents_json.join(", ")
        ));
    }

    let pred_count = 1 + rng.next_below(max_predicates as u64) as usize;
    let mut inverse_of: Vec<Option<usize>> = vec![None; pred_count];
    for i in 0..pred_count {
        if inverse_of[i].is_none() && rng.next_below(4) == 0 {
            let j = rng.next_below(pred_count as u64) as usize;
            if j != i && inverse_of[j].is_none() {
                inverse_of[i] = Some(j);
                inverse_of[j] = Some(i);
            }
        }
    }

    let mut pred_docs = Vec::new();
    for i in 0..pred_count {
        let domain = random_expr_json(rng, &classes, max_depth);
        let range = random_expr_json(rng, &classes, max_depth);
        let symmetric = rng.next_below(4) == 0;
        let transitive = rng.next_below(4) == 0;
        let functional = rng.next_below(4) == 0;
        let inverse_functional = rng.next_below(4) == 0;
        let inverse = match inverse_of[i] {
            Some(j) => format!(", \"inverse_of\": \"P{j}\""),
            None => String::new(),
        };
        pred_docs.push(format!(
            "{{\"name\": \"P{i}\", \"domain\": {domain}, \"range\": {range}, \
             \"functional\": {functional}, \"inverse_functional\": {inverse_functional}, \
             \"symmetric\": {symmetric}, \"transitive\": {transitive}{inverse}}}"
        ));
    }

    let text = format!(
        "{{\"classes\": [{}], \"predicates\": [{}]}}",
        class_docs.join(", "),
        pred_docs.join(", ")
    );
    Ontology::parse(&text).expect("generated ontology must parse")
}

pub fn random_triplet_set(
    rng: &mut SplitMix64,
    onto: &Ontology,
    max_objects: u64,
    max_triplets: u64,
) -> TripletSet {
    let predicates: Vec<&str> = onto.predicates().map(|p| p.name.as_str()).collect();
    let n = rng.next_below(max_triplets + 1);
    let mut set = TripletSet::new();
    for _ in 0..n {
        let s = rng.next_below(max_objects) as ObjectId;
        let mut o = rng.next_below(max_objects) as ObjectId;
        if o == s {
            o = (o + 1) % max_objects as ObjectId;
        }
        if s == o {
            continue; // max_objects == 1
        }
        let p = predicates[rng.next_below(predicates.len() as u64) as usize];
        set.insert(
            Triplet::new(s, p, o),
            ontoscene::reasoner::Provenance::Asserted,
        );
    }
    set
}

// ---------------------------------------------------------------------------
// brute-force ontology semantics (independent of the library's walkers)
// ---------------------------------------------------------------------------

/// Reachability over parent edges by saturation.
pub fn oracle_is_subclass(onto: &Ontology, child: &str, ancestor: &str) -> bool {
    let mut reachable: BTreeSet<String> = BTreeSet::new();
    reachable.insert(child.to_string());
    loop {
        let mut grew = false;
        for class in reachable.clone() {
            if let Some(def) = onto.class(&class) {
                for parent in &def.parents {
                    if reachable.insert(parent.clone()) {
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    reachable.contains(ancestor)
}

/// Set-semantics evaluation: the extension of an expression over all
/// declared classes, then membership.
pub fn oracle_eval(onto: &Ontology, expr: &ontoscene::ontology::ClassExpr, class: &str) -> bool {
    use ontoscene::ontology::ClassExpr;
    let all: BTreeSet<String> = onto.classes().map(|c| c.name.clone()).collect();
    fn extension(onto: &Ontology, expr: &ClassExpr, all: &BTreeSet<String>) -> BTreeSet<String> {
        match expr {
            ClassExpr::Named(name) => all
                .iter()
                .filter(|c| oracle_is_subclass(onto, c, name))
                .cloned()
                .collect(),
            ClassExpr::And(items) => items
                .iter()
                .map(|e| extension(onto, e, all))
                .reduce(|a, b| a.intersection(&b).cloned().collect())
                .unwrap_or_default(),
            ClassExpr::Or(items) => items
                .iter()
                .map(|e| extension(onto, e, all))
                .reduce(|a, b| a.union(&b).cloned().collect())
                .unwrap_or_default(),
            ClassExpr::Not(inner) => {
                let inner = extension(onto, inner, all);
                all.difference(&inner).cloned().collect()
            }
        }
    }
    extension(onto, expr, &all).contains(class)
}

/// Warshall-style closure, written independently of the worklist version.
pub fn oracle_closure(onto: &Ontology, asserted: &TripletSet) -> BTreeSet<(u32, String, u32)> {
    let mut set: BTreeSet<(u32, String, u32)> = asserted
        .triplets()
        .map(|t| (t.subject, t.predicate.clone(), t.object))
        .collect();
    loop {
        let mut additions: BTreeSet<(u32, String, u32)> = BTreeSet::new();
        for (s, p, o) in &set {
            let def = onto.predicate(p).expect("known predicate");
            if def.symmetric && !set.contains(&(*o, p.clone(), *s)) {
                additions.insert((*o, p.clone(), *s));
            }
            if let Some(q) = &def.inverse_of {
                if !set.contains(&(*o, q.clone(), *s)) {
                    additions.insert((*o, q.clone(), *s));
                }
            }
            if def.transitive {
                for (s2, p2, o2) in &set {
                    if p2 == p && s2 == o && o2 != s && !set.contains(&(*s, p.clone(), *o2)) {
                        additions.insert((*s, p.clone(), *o2));
                    }
                }
            }
        }
        if additions.is_empty() {
            break;
        }
        set.extend(additions);
    }
    set
}

// ---------------------------------------------------------------------------
// brute-force recall oracle
// ---------------------------------------------------------------------------

/// Enumerate the Top-K selection directly: collapse duplicates, rank each
/// pair's predicates, keep k per pair, order everything by the total rank
/// order and cut at K.
pub fn oracle_top_k(
    proposals: &[ScoredTriplet],
    top_k: usize,
    graph_k: usize,
) -> BTreeSet<(u32, String, u32)> {
    let mut best: BTreeMap<(u32, String, u32), f64> = BTreeMap::new();
    for p in proposals {
        let key = (p.subject, p.predicate.clone(), p.object);
        match best.get(&key) {
            Some(existing) if *existing >= p.score => {}
            _ => {
                best.insert(key, p.score);
            }
        }
    }

    // rank within each ordered pair, keep the k best predicates
    let mut kept: Vec<((u32, String, u32), f64)> = Vec::new();
    let pairs: BTreeSet<(u32, u32)> = best.keys().map(|(s, _, o)| (*s, *o)).collect();
    for (s, o) in pairs {
        let mut entries: Vec<(&(u32, String, u32), &f64)> = best
            .iter()
            .filter(|((bs, _, bo), _)| *bs == s && *bo == o)
            .collect();
        entries.sort_by(|a, b| b.1.total_cmp(a.1).then_with(|| a.0 .1.cmp(&b.0 .1)));
        for (key, score) in entries.into_iter().take(graph_k) {
            kept.push((key.clone(), *score));
        }
    }

    kept.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| a.0 .0.cmp(&b.0 .0))
            .then_with(|| a.0 .2.cmp(&b.0 .2))
            .then_with(|| a.0 .1.cmp(&b.0 .1))
    });
    kept.into_iter().take(top_k).map(|(key, _)| key).collect()
}

/// Per-image recall straight from the definition, or `None` to skip.
pub fn oracle_recall(
    gt: &TripletSet,
    proposals: &[ScoredTriplet],
    top_k: usize,
    graph_k: usize,
) -> Option<f64> {
    let mut per_pair: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for t in gt.triplets() {
        *per_pair.entry((t.subject, t.object)).or_default() += 1;
    }
    let gt_size: usize = per_pair.values().map(|c| (*c).min(graph_k)).sum();
    if gt_size == 0 {
        return None;
    }
    let selection = oracle_top_k(proposals, top_k, graph_k);
    let hits = gt
        .triplets()
        .filter(|t| selection.contains(&(t.subject, t.predicate.clone(), t.object)))
        .count();
    Some(hits as f64 / top_k.min(gt_size) as f64)
}

// ---------------------------------------------------------------------------
// scene graph helpers
// ---------------------------------------------------------------------------

pub fn make_graph(image_id: &str, classes: &[&str], triplets: Vec<(u32, &str, u32)>) -> SceneGraph {
    let (set, _) =
        TripletSet::from_asserted(triplets.into_iter().map(|(s, p, o)| Triplet::new(s, p, o)));
    SceneGraph {
        image_id: image_id.into(),
        width: 640,
        height: 480,
        tags: Default::default(),
        objects: classes
            .iter()
            .enumerate()
            .map(|(i, c)| SceneObject::new(i as u32, *c, [0.0, 0.0, 10.0, 10.0]))
            .collect(),
        triplets: set,
    }
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn teresa_ontology() -> Ontology {
    let text = std::fs::read_to_string(fixture_path("teresa_ontology.json"))
        .expect("fixture ontology present");
    Ontology::parse(&text).expect("fixture ontology parses")
}
