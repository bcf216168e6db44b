//! Diagnostic checks over a parsed ontology.
//!
//! These are syntactic lint-style checks; satisfiability of class
//! expressions is intentionally not decided here.

use super::Ontology;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

/// A single validation finding. Diagnostics are data: the caller decides
/// whether warnings are fatal.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    fn warning(subject: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            subject: subject.to_string(),
            message: message.into(),
        }
    }
}

pub(super) fn validate(onto: &Ontology) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for pred in onto.predicates() {
        if pred.symmetric && pred.domain != pred.range {
            out.push(Diagnostic::warning(
                &pred.name,
                "symmetric predicate has differing domain and range expressions; \
                 inferred reversals may violate them",
            ));
        }
        if pred.functional && pred.transitive {
            out.push(Diagnostic::warning(
                &pred.name,
                "predicate is both functional and transitive; transitive closure \
                 can violate functionality",
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::Ontology;
    use super::Severity;

    #[test]
    fn clean_ontology_has_no_diagnostics() {
        let onto = Ontology::parse(
            r#"{"classes": [{"name": "A"}],
                "predicates": [{"name": "p", "domain": {"class": "A"}, "range": {"class": "A"}}]}"#,
        )
        .unwrap();
        assert!(onto.validate().is_empty());
    }

    #[test]
    fn functional_transitive_flagged() {
        let onto = Ontology::parse(
            r#"{"classes": [{"name": "A"}],
                "predicates": [{"name": "p", "domain": {"class": "A"}, "range": {"class": "A"},
                                "functional": true, "transitive": true}]}"#,
        )
        .unwrap();
        let diags = onto.validate();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Warning);
        assert_eq!(diags[0].subject, "p");
    }

    #[test]
    fn asymmetric_domain_range_on_symmetric_predicate_flagged() {
        let onto = Ontology::parse(
            r#"{"classes": [{"name": "Person"}, {"name": "Chair"}],
                "predicates": [{"name": "beside", "domain": {"class": "Person"},
                                "range": {"class": "Chair"}, "symmetric": true}]}"#,
        )
        .unwrap();
        let diags = onto.validate();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].subject, "beside");
    }
}
