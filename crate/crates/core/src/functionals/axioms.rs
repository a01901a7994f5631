use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::bitcore::BitString;

/// `Φ^oracle(input)↓ = output`, with `oracle` the exact queried prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Axiom {
    pub oracle: BitString,
    pub input: usize,
    pub output: usize,
}

impl Axiom {
    pub fn new(oracle: BitString, input: usize, output: usize) -> Self {
        Axiom {
            oracle,
            input,
            output,
        }
    }

    /// Canonical order: oracle length-lex, then input, then output.
    fn canonical_cmp(&self, other: &Axiom) -> std::cmp::Ordering {
        self.oracle
            .length_lex_cmp(&other.oracle)
            .then(self.input.cmp(&other.input))
            .then(self.output.cmp(&other.output))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {}, {})", self.oracle, self.input, self.output)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AxiomViolation {
    /// Comparable oracles on the same input that are not one axiom.
    Conflict { first: Axiom, second: Axiom },
    /// `|ρ| < n`.
    InputExceedsUse { axiom: Axiom },
    /// `|ρ| < Φ^ρ(n)`.
    OutputExceedsUse { axiom: Axiom },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Conflict { first, second } => {
                write!(f, "inconsistent axioms {first} and {second}")
            }
            AxiomViolation::InputExceedsUse { axiom } => {
                write!(f, "axiom {axiom} queries fewer oracle bits than its input")
            }
            AxiomViolation::OutputExceedsUse { axiom } => {
                write!(f, "axiom {axiom} outputs more than its oracle length")
            }
        }
    }
}

impl std::error::Error for AxiomViolation {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalizeReport {
    /// Truncating the oracle to the output length would leave `|ρ| < n`.
    OutputBelowInput { axiom: Axiom },
    /// Two axioms become inconsistent once truncated.
    TruncationConflict { first: Axiom, second: Axiom },
    /// `Φ^ρ(i)` diverges for some `i < n` on the oracle of an input-`n` axiom.
    MissingBelow { axiom: Axiom, missing_input: usize },
    /// The set was inconsistent to begin with.
    Inconsistent(AxiomViolation),
}

impl fmt::Display for NormalizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizeReport::OutputBelowInput { axiom } => {
                write!(f, "axiom {axiom} cannot be truncated to its output length")
            }
            NormalizeReport::TruncationConflict { first, second } => {
                write!(f, "truncation makes {first} and {second} inconsistent")
            }
            NormalizeReport::MissingBelow {
                axiom,
                missing_input,
            } => write!(
                f,
                "missing Φ({missing_input}) below input {} (axiom {axiom})",
                axiom.input
            ),
            NormalizeReport::Inconsistent(v) => write!(f, "{v}"),
        }
    }
}

impl std::error::Error for NormalizeReport {}

/// First violation in canonical order, or `None` if the set is a consistent
/// functional obeying `|ρ| ≥ n` and `|ρ| ≥ output`.
pub fn check_consistency(axioms: &[Axiom]) -> Option<AxiomViolation> {
    let sorted = canonical(axioms.to_vec());
    for (j, b) in sorted.iter().enumerate() {
        if b.oracle.len() < b.input {
            return Some(AxiomViolation::InputExceedsUse { axiom: b.clone() });
        }
        if b.oracle.len() < b.output {
            return Some(AxiomViolation::OutputExceedsUse { axiom: b.clone() });
        }
        for a in &sorted[..j] {
            if a.input == b.input && a.oracle.is_comparable(&b.oracle) {
                return Some(AxiomViolation::Conflict {
                    first: a.clone(),
                    second: b.clone(),
                });
            }
        }
    }
    None
}

fn canonical(mut axioms: Vec<Axiom>) -> Vec<Axiom> {
    axioms.sort_by(Axiom::canonical_cmp);
    axioms.dedup();
    axioms
}

/// A consistent Turing functional given by finitely many axioms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FunctionalAxiomSet {
    axioms: Vec<Axiom>,
    by_input: BTreeMap<usize, Vec<usize>>,
}

impl FunctionalAxiomSet {
    pub fn new(axioms: Vec<Axiom>) -> Result<Self, AxiomViolation> {
        if let Some(v) = check_consistency(&axioms) {
            return Err(v);
        }
        Ok(Self::from_consistent(canonical(axioms)))
    }

    fn from_consistent(axioms: Vec<Axiom>) -> Self {
        let mut by_input: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, a) in axioms.iter().enumerate() {
            by_input.entry(a.input).or_default().push(i);
        }
        FunctionalAxiomSet { axioms, by_input }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// The axiom computing `Φ^oracle(n)`, if any. Consistency makes it unique.
    pub fn axiom_for(&self, oracle: &BitString, n: usize) -> Option<&Axiom> {
        self.by_input
            .get(&n)?
            .iter()
            .map(|&i| &self.axioms[i])
            .find(|a| a.oracle.is_prefix_of(oracle))
    }

    /// `Φ^oracle(n)`; `None` is divergence.
    pub fn apply(&self, oracle: &BitString, n: usize) -> Option<usize> {
        self.axiom_for(oracle, n).map(|a| a.output)
    }

    /// Truncates every oracle to its output length and checks that each
    /// input-`n` axiom sits above convergent computations for all `i < n`.
    pub fn normalize(&self) -> Result<FunctionalAxiomSet, NormalizeReport> {
        let mut truncated = Vec::with_capacity(self.axioms.len());
        for a in &self.axioms {
            if a.output < a.input {
                return Err(NormalizeReport::OutputBelowInput { axiom: a.clone() });
            }
            truncated.push(Axiom::new(a.oracle.prefix(a.output), a.input, a.output));
        }
        let normalized = match FunctionalAxiomSet::new(truncated) {
            Ok(f) => f,
            Err(AxiomViolation::Conflict { first, second }) => {
                return Err(NormalizeReport::TruncationConflict { first, second })
            }
            Err(other) => return Err(NormalizeReport::Inconsistent(other)),
        };
        for a in &normalized.axioms {
            if let Some(missing_input) =
                (0..a.input).find(|&i| normalized.apply(&a.oracle, i).is_none())
            {
                return Err(NormalizeReport::MissingBelow {
                    axiom: a.clone(),
                    missing_input,
                });
            }
        }
        Ok(normalized)
    }

    /// Whether every oracle already has length equal to its output.
    pub fn is_use_exact(&self) -> bool {
        self.axioms.iter().all(|a| a.oracle.len() == a.output)
    }
}

/// Consistency then normalization, as the file loader does.
pub fn validate(axioms: Vec<Axiom>) -> Result<FunctionalAxiomSet, NormalizeReport> {
    FunctionalAxiomSet::new(axioms)
        .map_err(NormalizeReport::Inconsistent)?
        .normalize()
}
