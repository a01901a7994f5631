//! The compressor machine `M` built from a pointed functional: every
//! `U`-description `σ` of `ρ↾t` with `t ∈ (Φ^ρ(n), Φ^ρ(n+1)]` is stretched by
//! the digits `τ = ρ[t..Φ^ρ(n+1))` into a description of `ρ↾Φ^ρ(n+1)`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bitcore::{check_prefix_free, BitString};
use crate::functionals::{check_pointed, FunctionalAxiomSet, PointedFailure, PointedSequence};
use crate::machines::{Machine, UniversalCatalog};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CompressionVector {
    pub rho: BitString,
    pub sigma: BitString,
    pub n: usize,
    pub t: usize,
    /// `Φ^ρ(n+1)`.
    pub r_next: usize,
}

impl CompressionVector {
    /// The suffix `τ` appended to `σ`.
    pub fn tau(&self) -> BitString {
        self.rho.slice(self.t, self.r_next)
    }

    pub fn description(&self) -> BitString {
        self.sigma.concat(&self.tau())
    }

    pub fn output(&self) -> BitString {
        self.rho.prefix(self.r_next)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompressorError {
    #[error("description {description} assigned both {first} and {second}")]
    Conflict {
        description: BitString,
        first: BitString,
        second: BitString,
        vectors: Box<(CompressionVector, CompressionVector)>,
    },
    #[error("M is not prefix-free: {shorter} is a prefix of {longer}")]
    NotPrefixFree {
        shorter: BitString,
        longer: BitString,
    },
    #[error("functional is not pointed along X: {0}")]
    NotPointed(PointedFailure),
    #[error("bound violated at t = {}: K_U'(X↾{}) = {} exceeds {}", .0.t, .0.r_next, .0.k_output, .0.allowed)]
    BoundViolated(Box<TheoremWitness>),
}

/// All vectors `(ρ, σ, n, t)` with `|ρ| ≤ oracle_bound`, ordered by `ρ`
/// (length-lex), then `σ` (length-lex), then `n`, then `t`.
pub fn enumerate_vectors(
    phi: &FunctionalAxiomSet,
    u: &UniversalCatalog,
    oracle_bound: usize,
) -> Vec<CompressionVector> {
    if phi.is_empty() {
        return Vec::new();
    }
    let rhos: Vec<BitString> = BitString::all_up_to(oracle_bound).collect();
    rhos.par_iter()
        .flat_map_iter(|rho| vectors_for(phi, u, rho))
        .collect()
}

fn vectors_for(
    phi: &FunctionalAxiomSet,
    u: &UniversalCatalog,
    rho: &BitString,
) -> Vec<CompressionVector> {
    // Longest run Φ^ρ(0) < Φ^ρ(1) < … of convergent values.
    let mut values: Vec<usize> = Vec::new();
    while let Some(r) = phi.apply(rho, values.len()) {
        if values.last().is_some_and(|&prev| r <= prev) {
            break;
        }
        values.push(r);
    }
    let mut out = Vec::new();
    for n in 0..values.len().saturating_sub(1) {
        let r_next = values[n + 1];
        for t in values[n] + 1..=r_next {
            for sigma in u.programs_for(&rho.prefix(t)) {
                out.push(CompressionVector {
                    rho: rho.clone(),
                    sigma,
                    n,
                    t,
                    r_next,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        a.sigma
            .length_lex_cmp(&b.sigma)
            .then(a.n.cmp(&b.n))
            .then(a.t.cmp(&b.t))
    });
    out
}

#[derive(Debug, Clone)]
pub struct CompressorMachine {
    pub machine: Machine,
    pub vector_count: usize,
}

impl CompressorMachine {
    pub fn table_size(&self) -> usize {
        self.machine.entries().map_or(0, <[_]>::len)
    }
}

/// Builds `M`, aborting if two vectors disagree on a description or if the
/// resulting domain is not prefix-free.
pub fn build_m(
    phi: &FunctionalAxiomSet,
    u: &UniversalCatalog,
    oracle_bound: usize,
) -> Result<CompressorMachine, CompressorError> {
    let vectors = enumerate_vectors(phi, u, oracle_bound);
    let mut table: HashMap<BitString, (BitString, usize)> = HashMap::new();
    for (i, v) in vectors.iter().enumerate() {
        let output = v.output();
        match table.get(&v.description()) {
            Some((existing, j)) if *existing != output => {
                return Err(CompressorError::Conflict {
                    description: v.description(),
                    first: existing.clone(),
                    second: output,
                    vectors: Box::new((vectors[*j].clone(), v.clone())),
                })
            }
            Some(_) => {}
            None => {
                table.insert(v.description(), (output, i));
            }
        }
    }
    let mut entries: Vec<(BitString, BitString)> =
        table.into_iter().map(|(k, (out, _))| (k, out)).collect();
    entries.sort();
    if let Some(v) = check_prefix_free(entries.iter().map(|(k, _)| k)) {
        return Err(CompressorError::NotPrefixFree {
            shorter: v.shorter,
            longer: v.longer,
        });
    }
    let machine = Machine::table(entries).expect("checked above");
    Ok(CompressorMachine {
        machine,
        vector_count: vectors.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremWitness {
    pub t: usize,
    pub n: usize,
    /// `r_{n+1}`.
    pub r_next: usize,
    /// `K_U(X↾t)`.
    pub k_input: usize,
    /// `K_{U'}(X↾r_{n+1})`.
    pub k_output: usize,
    pub c: usize,
    pub d: usize,
    /// `K_U(X↾t) + (r_{n+1} − t) + d`.
    pub allowed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub catalog: String,
    pub oracle_bound: usize,
    pub pointed: PointedSequence,
    pub vector_count: usize,
    pub table_size: usize,
    pub prefix_free: bool,
    pub d: usize,
    pub c: usize,
    pub witnesses: Vec<TheoremWitness>,
    /// Compressible `t ≤ r_0`, which no interval `(r_n, r_{n+1}]` contains.
    pub unplaced: Vec<usize>,
}

/// Builds `M` over oracles up to `r_m`, appends it to the catalog (realizing
/// `d`), and checks the compression bound at every `t ≤ r_m` with
/// `K_U(X↾t) ≤ t − c − d`.
pub fn verify_theorem_bound(
    x_prefix: &BitString,
    phi: &FunctionalAxiomSet,
    u: &UniversalCatalog,
    c: usize,
) -> Result<TheoremReport, CompressorError> {
    let pointed = check_pointed(phi, x_prefix).map_err(CompressorError::NotPointed)?;
    let bound = pointed.values.last().copied().unwrap_or(0);
    let built = build_m(phi, u, bound)?;
    let vector_count = built.vector_count;
    let table_size = built.table_size();
    let (extended, d) = u.extend(built.machine);

    let mut witnesses = Vec::new();
    let mut unplaced = Vec::new();
    for t in 1..=bound {
        let k_input = u.k(&x_prefix.prefix(t));
        if k_input as i64 > t as i64 - c as i64 - d as i64 {
            continue;
        }
        let Some(n) = pointed.interval_of(t) else {
            unplaced.push(t);
            continue;
        };
        let r_next = pointed.values[n + 1];
        let k_output = extended.k(&x_prefix.prefix(r_next));
        let allowed = k_input + (r_next - t) + d;
        let witness = TheoremWitness {
            t,
            n,
            r_next,
            k_input,
            k_output,
            c,
            d,
            allowed,
        };
        if k_output > allowed || k_output as i64 > r_next as i64 - c as i64 {
            return Err(CompressorError::BoundViolated(Box::new(witness)));
        }
        witnesses.push(witness);
    }
    Ok(TheoremReport {
        catalog: u.id().to_string(),
        oracle_bound: bound,
        pointed,
        vector_count,
        table_size,
        prefix_free: true,
        d,
        c,
        witnesses,
        unplaced,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Criterion {
    Holds,
    Fails { index: usize },
}

/// `K_U(X↾r_n) > r_n − c` for every listed `n`.
pub fn randomness_criterion(
    x_prefix: &BitString,
    rs: &PointedSequence,
    c: usize,
    u: &UniversalCatalog,
) -> Criterion {
    rs.values
        .iter()
        .position(|&r| u.k(&x_prefix.prefix(r)) as i64 <= r as i64 - c as i64)
        .map_or(Criterion::Holds, |index| Criterion::Fails { index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::{bs, encode_literal};
    use crate::functionals::{gen_ones_counter, Axiom};
    use crate::machines::header;

    fn phi_2_4() -> FunctionalAxiomSet {
        FunctionalAxiomSet::new(vec![Axiom::new(bs("01"), 0, 2), Axiom::new(bs("0101"), 1, 4)])
            .unwrap()
    }

    /// Direct check of both conditions over every (ρ, σ, n, t) in bounds.
    fn brute_vectors(
        phi: &FunctionalAxiomSet,
        u: &UniversalCatalog,
        bound: usize,
        max_sigma: usize,
    ) -> Vec<CompressionVector> {
        let halting: Vec<(BitString, BitString)> = BitString::all_up_to(max_sigma)
            .filter_map(|p| u.run(&p, None).map(|out| (p, out)))
            .collect();
        let mut out = Vec::new();
        for rho in BitString::all_up_to(bound) {
            for (sigma, produced) in &halting {
                for n in 0..=bound {
                    let vals: Option<Vec<usize>> = (0..=n + 1).map(|i| phi.apply(&rho, i)).collect();
                    let Some(vals) = vals else { continue };
                    if !vals.windows(2).all(|w| w[0] < w[1]) {
                        continue;
                    }
                    for t in 0..=rho.len() {
                        if vals[n] < t && t <= vals[n + 1] && *produced == rho.prefix(t) {
                            out.push(CompressionVector {
                                rho: rho.clone(),
                                sigma: sigma.clone(),
                                n,
                                t,
                                r_next: vals[n + 1],
                            });
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn empty_functional_has_no_vectors() {
        let u = UniversalCatalog::base();
        assert!(enumerate_vectors(&FunctionalAxiomSet::empty(), &u, 6).is_empty());
        let m = build_m(&FunctionalAxiomSet::empty(), &u, 6).unwrap();
        assert_eq!(m.table_size(), 0);
    }

    #[test]
    fn listed_vector_for_interior_t() {
        let u = UniversalCatalog::base();
        let sigma0 = header(0).concat(&encode_literal(&bs("010")));
        let vs = enumerate_vectors(&phi_2_4(), &u, 4);
        let hit = vs
            .iter()
            .find(|v| v.rho == bs("0101") && v.sigma == sigma0 && v.n == 0 && v.t == 3)
            .expect("vector (0101, σ0, 0, 3) is listed");
        assert_eq!(hit.tau(), bs("1"));
        assert!(!vs.iter().any(|v| v.rho == bs("0101") && v.t == 2));

        let m = build_m(&phi_2_4(), &u, 4).unwrap();
        assert_eq!(m.machine.run(&sigma0.concat(&bs("1")), None), Some(bs("0101")));
    }

    #[test]
    fn boundary_t_gives_empty_suffix() {
        let u = UniversalCatalog::base();
        let m = build_m(&phi_2_4(), &u, 4).unwrap();
        let sigma = header(0).concat(&encode_literal(&bs("0101")));
        assert_eq!(m.machine.run(&sigma, None), u.run(&sigma, None));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let (u, _) = UniversalCatalog::base()
            .extend_table(vec![(bs("0"), bs("010")), (bs("10"), bs("0101")), (bs("11"), bs("011"))])
            .unwrap();
        let phi = phi_2_4();
        let mut fast = enumerate_vectors(&phi, &u, 5);
        // Literal programs for strings of length <= 5 have length <= 12.
        let mut slow = brute_vectors(&phi, &u, 5, 12);
        let key = |v: &CompressionVector| (v.rho.len(), v.rho.clone(), v.sigma.len(), v.sigma.clone(), v.n, v.t);
        fast.sort_by_key(key);
        slow.sort_by_key(key);
        assert_eq!(fast, slow);
    }

    #[test]
    fn accounting_and_soundness() {
        let (u, _) = UniversalCatalog::base()
            .extend_table(vec![(bs("0"), bs("01")), (bs("1"), bs("0110"))])
            .unwrap();
        let phi = gen_ones_counter(&bs("0110110"), 0);
        for v in enumerate_vectors(&phi, &u, 7) {
            assert_eq!(v.description().len(), v.sigma.len() + v.r_next - v.t);
            assert_eq!(v.output().len(), v.r_next);
            let head = u.run(&v.sigma, None).unwrap();
            assert!(head.is_prefix_of(&v.output()));
            assert_eq!(head.concat(&v.tau()), v.output());
        }
    }

    #[test]
    fn vacuous_bound_on_base_catalog() {
        let x = bs("0110110");
        let report =
            verify_theorem_bound(&x, &gen_ones_counter(&x, 0), &UniversalCatalog::base(), 0).unwrap();
        assert!(report.witnesses.is_empty());
        assert!(report.prefix_free);
        assert_eq!(report.d, 2);
    }

    #[test]
    fn bound_witnessed_with_short_description() {
        // Ones at 1,3,4,6,7: r = [2, 4, 5, 7, 8].
        let x = bs("01011011");
        let phi = gen_ones_counter(&x, 0);
        let (u, _) = UniversalCatalog::base().extend_table(vec![(bs("0"), x.prefix(6))]).unwrap();
        assert_eq!(u.k(&x.prefix(6)), 3);
        let report = verify_theorem_bound(&x, &phi, &u, 0).unwrap();
        assert_eq!(report.d, 3);
        let w = report.witnesses.iter().find(|w| w.t == 6).unwrap();
        assert_eq!((w.n, w.r_next, w.k_input), (2, 7, 3));
        assert!(w.k_output <= w.k_input + 1 + w.d);
        assert!(w.k_output <= 7);
    }

    #[test]
    fn bound_at_interval_end() {
        let x = bs("01011011");
        let phi = gen_ones_counter(&x, 0);
        let (u, _) = UniversalCatalog::base().extend_table(vec![(bs("0"), x.prefix(7))]).unwrap();
        let report = verify_theorem_bound(&x, &phi, &u, 1).unwrap();
        let w = report.witnesses.iter().find(|w| w.t == 7).unwrap();
        assert_eq!(w.r_next, 7);
        assert!(w.k_output <= w.k_input + w.d);
        assert!(w.k_output < 7);
    }

    #[test]
    fn criterion_examples() {
        let base = UniversalCatalog::base();
        assert_eq!(
            randomness_criterion(&bs("01"), &PointedSequence::new(vec![], 2), 0, &base),
            Criterion::Holds
        );
        let rs = PointedSequence::new(vec![2], 2);
        assert_eq!(base.k(&bs("01")), 6);
        assert_eq!(randomness_criterion(&bs("01"), &rs, 0, &base), Criterion::Holds);

        let (u, _) = base.extend_table(vec![(bs("0"), bs("01"))]).unwrap();
        assert_eq!(u.k(&bs("01")), 3);
        assert_eq!(randomness_criterion(&bs("01"), &rs, 0, &u), Criterion::Holds);

        let (u, _) = base.extend_table(vec![(bs("0"), bs("0101"))]).unwrap();
        let rs = PointedSequence::new(vec![4], 4);
        assert_eq!(
            randomness_criterion(&bs("0101"), &rs, 0, &u),
            Criterion::Fails { index: 0 }
        );
    }
}
