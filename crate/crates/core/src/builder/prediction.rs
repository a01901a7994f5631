use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::bitcore::{BitString, BitsError};

/// A partial forecast of the digit that follows a prefix.
pub trait PredictionRule {
    fn predict(&self, prefix: &BitString) -> Option<bool>;
}

/// Predictions listed prefix by prefix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableRule(pub BTreeMap<BitString, bool>);

impl PredictionRule for TableRule {
    fn predict(&self, prefix: &BitString) -> Option<bool> {
        self.0.get(prefix).copied()
    }
}

/// Predicts `0` at every position `ℓ − 1` for `ℓ` in the schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleZeroRule {
    positions: BTreeSet<usize>,
}

impl ScheduleZeroRule {
    pub fn new(lengths: &[usize]) -> Self {
        ScheduleZeroRule {
            positions: lengths.iter().filter_map(|l| l.checked_sub(1)).collect(),
        }
    }
}

impl PredictionRule for ScheduleZeroRule {
    fn predict(&self, prefix: &BitString) -> Option<bool> {
        self.positions.contains(&prefix.len()).then_some(false)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PredictionScore {
    pub defined: usize,
    pub correct: usize,
    /// Positions where the rule made a prediction.
    pub positions: Vec<usize>,
}

/// Asks the rule about `z↾t` for every `t < |z|` and scores against `z(t)`.
pub fn eval_prediction(rule: &dyn PredictionRule, z: &BitString) -> PredictionScore {
    let mut score = PredictionScore::default();
    for t in 0..z.len() {
        if let Some(guess) = rule.predict(&z.prefix(t)) {
            score.defined += 1;
            score.positions.push(t);
            if z.get(t) == Some(guess) {
                score.correct += 1;
            }
        }
    }
    score
}

/// `x` with a `0` spliced in at position `t`.
pub fn insert_zero(x: &BitString, t: usize) -> Result<BitString, BitsError> {
    if t > x.len() {
        return Err(BitsError::OutOfBounds { index: t, len: x.len() });
    }
    Ok(x.prefix(t).with_bit(false).concat(&x.slice(t, x.len())))
}
