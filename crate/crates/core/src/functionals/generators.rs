//! The two example functionals: a ones-counter that reads ever longer
//! segments of the oracle, and the settling time of a toy enumeration.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::axioms::{Axiom, FunctionalAxiomSet};
use crate::bitcore::BitString;

/// `r_n` is the position just after the `(count_origin + n + 1)`-th `1` of
/// `x_prefix`; emits `(X↾r_n, n, r_n)` for every `n` the prefix supports.
pub fn gen_ones_counter(x_prefix: &BitString, count_origin: usize) -> FunctionalAxiomSet {
    let axioms = x_prefix
        .bits()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .skip(count_origin)
        .enumerate()
        .map(|(n, (pos, _))| Axiom::new(x_prefix.prefix(pos + 1), n, pos + 1))
        .collect();
    FunctionalAxiomSet::new(axioms).expect("nested oracles on distinct inputs are consistent")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StageTableError {
    #[error("stages must be strictly increasing: stage {next} follows {previous}")]
    NotIncreasing { previous: usize, next: usize },
}

/// A finished enumeration of a finite set: element `e` enumerated at stage
/// `s` belongs to `A_t` for every `t > s`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct StageTable {
    stages: Vec<(usize, usize)>,
}

impl TryFrom<Vec<(usize, usize)>> for StageTable {
    type Error = StageTableError;

    fn try_from(stages: Vec<(usize, usize)>) -> Result<Self, Self::Error> {
        StageTable::new(stages)
    }
}

impl From<StageTable> for Vec<(usize, usize)> {
    fn from(t: StageTable) -> Self {
        t.stages
    }
}

impl StageTable {
    pub fn new(stages: Vec<(usize, usize)>) -> Result<Self, StageTableError> {
        if let Some(w) = stages.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(StageTableError::NotIncreasing {
                previous: w[0].0,
                next: w[1].0,
            });
        }
        Ok(StageTable { stages })
    }

    pub fn stages(&self) -> &[(usize, usize)] {
        &self.stages
    }

    /// The final set `A`.
    pub fn final_set(&self) -> BTreeSet<usize> {
        self.stages.iter().map(|&(_, e)| e).collect()
    }

    /// `A_s`: elements enumerated strictly before stage `s`.
    pub fn set_at(&self, s: usize) -> BTreeSet<usize> {
        self.stages
            .iter()
            .filter(|&&(stage, _)| stage < s)
            .map(|&(_, e)| e)
            .collect()
    }

    /// The first `len` digits of the characteristic sequence of `A`.
    pub fn characteristic_prefix(&self, len: usize) -> BitString {
        let a = self.final_set();
        BitString::from_bits((0..len).map(|i| a.contains(&i)).collect())
    }

    /// Least `s` with `A_t↾n = A↾n` for all `t ≥ s`.
    pub fn settled_from(&self, n: usize) -> usize {
        self.stages
            .iter()
            .filter(|&&(_, e)| e < n)
            .map(|&(stage, _)| stage + 1)
            .max()
            .unwrap_or(0)
    }

    /// `r_0 = 0` and `r_{n+1}` the least number above `r_n` from which
    /// `A_s↾n` agrees with `A↾n`, for every value not exceeding `bound`.
    pub fn settling_sequence(&self, bound: usize) -> Vec<usize> {
        let mut rs = vec![0];
        let mut n = 0;
        loop {
            let next = (rs[n] + 1).max(self.settled_from(n));
            if next > bound {
                return rs;
            }
            rs.push(next);
            n += 1;
        }
    }
}

/// Axioms `(X↾r_n, n, r_n)` along the settling-time sequence, for all `r_n`
/// within the prefix. Whether they are pointed for this `X` is left to the
/// checker.
pub fn gen_settling_time(table: &StageTable, x_prefix: &BitString) -> FunctionalAxiomSet {
    let axioms = table
        .settling_sequence(x_prefix.len())
        .into_iter()
        .enumerate()
        .map(|(n, r)| Axiom::new(x_prefix.prefix(r), n, r))
        .collect();
    FunctionalAxiomSet::new(axioms).expect("nested oracles on distinct inputs are consistent")
}
