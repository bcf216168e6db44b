//! Multi-label hinge ranking loss.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LossError {
    #[error("labels ({labels}) and scores ({scores}) must both have length {expected}")]
    LengthMismatch {
        labels: usize,
        scores: usize,
        expected: usize,
    },
}

/// Flattened labels and scores for a minibatch of `pair_count` object pairs
/// scored over `predicate_count` predicates.
#[derive(Debug, Clone)]
pub struct LossInput {
    pub labels: Vec<bool>,
    pub scores: Vec<f64>,
    pub pair_count: usize,
    pub predicate_count: usize,
}

/// Pairwise margin loss over all (negative, positive) label pairs:
///
/// ```text
/// L = 1/(N*n) * sum_{i: y_i=0} sum_{j: y_j=1} max(0, 1 - (score_j - score_i))
/// ```
///
/// where `N` is the pair count and `n` the predicate count. The loss is zero
/// iff every positive outranks every negative by at least the unit margin;
/// with no positives or no negatives the sum is empty and the loss is zero.
pub fn hinge_loss(input: &LossInput) -> Result<f64, LossError> {
    let expected = input.pair_count * input.predicate_count;
    if input.labels.len() != expected || input.scores.len() != expected {
        return Err(LossError::LengthMismatch {
            labels: input.labels.len(),
            scores: input.scores.len(),
            expected,
        });
    }

    let positives: Vec<f64> = input
        .scores
        .iter()
        .zip(&input.labels)
        .filter(|(_, &label)| label)
        .map(|(&score, _)| score)
        .collect();
    let negatives: Vec<f64> = input
        .scores
        .iter()
        .zip(&input.labels)
        .filter(|(_, &label)| !label)
        .map(|(&score, _)| score)
        .collect();

    let mut total = 0.0;
    for &neg in &negatives {
        for &pos in &positives {
            total += (1.0 - (pos - neg)).max(0.0);
        }
    }
    Ok(total / expected as f64)
}
