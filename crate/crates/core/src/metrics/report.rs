//! Report rendering: a human table and a machine-diffable JSON form.

use super::{MetricKind, MetricsReport};
use std::fmt::Write;

fn metric_name(kind: MetricKind) -> &'static str {
    match kind {
        MetricKind::Recall => "R@K",
        MetricKind::MeanRecall => "mR@K",
        MetricKind::ZeroShotRecall => "zR@K",
    }
}

fn fmt_value(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:6.2}"),
        None => "     -".to_string(),
    }
}

/// One row per (metric, K, k) cell plus the per-predicate table.
pub fn render_report(report: &MetricsReport) -> String {
    let mut out = String::new();
    writeln!(out, "metric   K    k   value").unwrap();
    for cell in &report.cells {
        writeln!(
            out,
            "{:<6} {:>4} {:>4}  {}",
            metric_name(cell.metric),
            cell.top_k,
            cell.graph_constraint,
            fmt_value(cell.value)
        )
        .unwrap();
    }
    writeln!(
        out,
        "images evaluated: {}  skipped: {}",
        report.images_evaluated, report.images_skipped
    )
    .unwrap();
    if let (Some(evaluated), Some(skipped)) = (
        report.zero_shot_images_evaluated,
        report.zero_shot_images_skipped,
    ) {
        writeln!(
            out,
            "zero-shot images evaluated: {evaluated}  skipped: {skipped}"
        )
        .unwrap();
    }

    if !report.per_predicate.is_empty() {
        writeln!(out).unwrap();
        writeln!(out, "per-predicate recall (mR components)").unwrap();
        writeln!(out, "predicate                  images  (K, k): value").unwrap();
        for row in &report.per_predicate {
            let values: Vec<String> = row
                .values
                .iter()
                .map(|(top_k, k, v)| format!("({top_k},{k}): {}", fmt_value(*v).trim()))
                .collect();
            writeln!(
                out,
                "{:<26} {:>6}  {}",
                row.predicate,
                row.images_evaluated,
                values.join("  ")
            )
            .unwrap();
        }
    }
    out
}

/// Machine-readable variant for diffing.
pub fn report_to_json(report: &MetricsReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialization cannot fail")
}
