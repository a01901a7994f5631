use std::fmt;

use serde::Serialize;

use super::axioms::FunctionalAxiomSet;
use crate::bitcore::{nat_to_string, BitString};
use crate::machines::UniversalCatalog;

/// `r_0 < r_1 < … < r_m`, each certified by `Φ^{X↾r_n}(n) = r_n` inside an
/// `X`-prefix of length `horizon`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointedSequence {
    pub values: Vec<usize>,
    pub horizon: usize,
}

impl PointedSequence {
    pub fn new(values: Vec<usize>, horizon: usize) -> Self {
        assert!(
            values.windows(2).all(|w| w[0] < w[1]),
            "pointed sequences are strictly increasing"
        );
        assert!(values.iter().all(|&r| r <= horizon));
        PointedSequence { values, horizon }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The `n` with `t ∈ (r_n, r_{n+1}]`, if any.
    pub fn interval_of(&self, t: usize) -> Option<usize> {
        self.values
            .windows(2)
            .position(|w| w[0] < t && t <= w[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointedFailureKind {
    /// The certifying computation queried a different number of bits than it output.
    UseMismatch { used: usize, output: usize },
    /// `r_n ≤ r_{n-1}`.
    NotIncreasing { previous: usize, value: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PointedFailure {
    pub index: usize,
    pub kind: PointedFailureKind,
}

impl fmt::Display for PointedFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PointedFailureKind::UseMismatch { used, output } => write!(
                f,
                "index {}: oracle use {used} differs from output {output}",
                self.index
            ),
            PointedFailureKind::NotIncreasing { previous, value } => write!(
                f,
                "index {}: value {value} does not exceed {previous}",
                self.index
            ),
        }
    }
}

impl std::error::Error for PointedFailure {}

/// Reads off `r_0, r_1, …` from `Φ` along `x_prefix` until the first input
/// that diverges within the prefix. A violation of use-exactness or strict
/// monotonicity is a failure at that index; divergence just ends the sequence.
pub fn check_pointed(
    phi: &FunctionalAxiomSet,
    x_prefix: &BitString,
) -> Result<PointedSequence, PointedFailure> {
    let mut values: Vec<usize> = Vec::new();
    for n in 0.. {
        let Some(axiom) = phi.axiom_for(x_prefix, n) else {
            break;
        };
        if axiom.oracle.len() != axiom.output {
            return Err(PointedFailure {
                index: n,
                kind: PointedFailureKind::UseMismatch {
                    used: axiom.oracle.len(),
                    output: axiom.output,
                },
            });
        }
        if let Some(&previous) = values.last() {
            if axiom.output <= previous {
                return Err(PointedFailure {
                    index: n,
                    kind: PointedFailureKind::NotIncreasing {
                        previous,
                        value: axiom.output,
                    },
                });
            }
        }
        values.push(axiom.output);
    }
    Ok(PointedSequence::new(values, x_prefix.len()))
}

/// `max K(r_n | τ)` over listed `n` and every `τ` with `X↾r_n ⊆ τ ⊆ x_prefix`;
/// 0 for an empty sequence.
pub fn nonuniform_pointedness_profile(
    u: &UniversalCatalog,
    x_prefix: &BitString,
    rs: &PointedSequence,
) -> usize {
    rs.values
        .iter()
        .flat_map(|&r| {
            let target = nat_to_string(r as u64);
            (r..=x_prefix.len()).map(move |len| (target.clone(), len))
        })
        .map(|(target, len)| u.k_given(&target, &x_prefix.prefix(len)))
        .max()
        .unwrap_or(0)
}
