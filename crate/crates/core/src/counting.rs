//! Brute-force checks of the relativized counting bounds, symmetry of
//! information, and incompressible extensions, with empirical constants.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitcore::{nat_to_string, BitString, DyadicWeight};
use crate::machines::{header, Machine, UniversalCatalog};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingInstance {
    pub sigma: BitString,
    pub n: usize,
    /// Signed, so that permissive thresholds `n − r` above `n` can be asked for.
    pub r: i64,
}

impl CountingInstance {
    pub fn new(sigma: BitString, n: usize, r: i64) -> Self {
        assert!(n > sigma.len(), "instances need n > |σ|");
        CountingInstance { sigma, n, r }
    }

    fn extensions(&self) -> impl Iterator<Item = BitString> + '_ {
        BitString::all_of_length(self.n - self.sigma.len()).map(|s| self.sigma.concat(&s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingVerdict {
    pub lhs_count: u64,
    pub rhs_bound: DyadicWeight,
    pub c_used: i64,
    pub holds: bool,
}

impl CountingVerdict {
    fn new(lhs_count: u64, rhs_bound: DyadicWeight, c_used: i64) -> Self {
        let holds = DyadicWeight::from_count(lhs_count) <= rhs_bound;
        CountingVerdict {
            lhs_count,
            rhs_bound,
            c_used,
            holds,
        }
    }
}

/// `2^{-F(n|σ*)}`: the total weight of programs that, given `σ*`, describe a
/// length-`n` extension of `σ`.
pub fn relativized_weight(u: &UniversalCatalog, sigma: &BitString, n: usize) -> DyadicWeight {
    assert!(n > sigma.len());
    let star = u.shortest_desc(sigma);
    let extends = |out: &BitString| out.len() == n && sigma.is_prefix_of(out);
    let mut total = DyadicWeight::zero();
    for (i, m) in u.machines().enumerate() {
        let head = header(i).len() as i64;
        match m {
            // One literal program of length 2n + 1 per extension.
            Machine::Literal => {
                total += &DyadicWeight::pow2((n - sigma.len()) as i64 - (2 * n + 1) as i64 - head)
            }
            Machine::Table(t) => {
                for (p, out) in t.entries() {
                    if extends(out) {
                        total += &DyadicWeight::pow2(-(head + p.len() as i64));
                    }
                }
            }
            Machine::Conditional(c) => {
                for (p, out) in c.table_for(&star).map_or(&[][..], |t| t.entries()) {
                    if extends(out) {
                        total += &DyadicWeight::pow2(-(head + p.len() as i64));
                    }
                }
            }
        }
    }
    total
}

/// Everything about `(σ, n)` the lemma needs, independent of `r` and `c`.
#[derive(Debug, Clone)]
pub struct LemmaProfile {
    pub sigma: BitString,
    pub n: usize,
    pub k_sigma: usize,
    /// `K(n | σ*)`.
    pub k_n_given: usize,
    /// `K(τ | σ*)` for each length-`n` extension, sorted ascending.
    pub k_extensions: Vec<usize>,
    pub weight: DyadicWeight,
}

impl LemmaProfile {
    pub fn compute(u: &UniversalCatalog, sigma: &BitString, n: usize) -> Self {
        let inst = CountingInstance::new(sigma.clone(), n, 0);
        let report = u.k_of(sigma, None);
        let star = report.witness_program;
        let mut k_extensions: Vec<usize> = inst.extensions().map(|t| u.k_given(&t, &star)).collect();
        k_extensions.sort_unstable();
        LemmaProfile {
            sigma: sigma.clone(),
            n,
            k_sigma: report.k,
            k_n_given: u.k_given(&nat_to_string(n as u64), &star),
            k_extensions,
            weight: relativized_weight(u, sigma, n),
        }
    }

    pub fn lhs(&self, r: i64) -> u64 {
        let threshold = self.n as i64 - r - self.k_sigma as i64;
        self.k_extensions
            .partition_point(|&k| k as i64 <= threshold) as u64
    }

    fn rhs_exponent(&self, r: i64, c: i64) -> i64 {
        self.n as i64 - self.k_sigma as i64 + c - r - self.k_n_given as i64
    }

    pub fn verdict(&self, r: i64, c: i64) -> CountingVerdict {
        CountingVerdict::new(self.lhs(r), DyadicWeight::pow2(self.rhs_exponent(r, c)), c)
    }

    /// Least `c` making the lemma display hold, or `None` if every `c` does.
    pub fn least_lemma_constant(&self, r: i64) -> Option<i64> {
        let lhs = self.lhs(r);
        (lhs > 0).then(|| ceil_log2(lhs) - self.rhs_exponent(r, 0))
    }

    /// `2^{-F(n|σ*)} < 2^{c − K(n|σ*)}`.
    pub fn proof_route_holds(&self, c: i64) -> bool {
        self.weight < DyadicWeight::pow2(c - self.k_n_given as i64)
    }

    /// Least `c` making the strict proof inequality hold.
    pub fn least_proof_constant(&self) -> Option<i64> {
        if self.weight.is_zero() {
            return None;
        }
        // Least j with 2^j > m·2^x (m odd) is x + bits(m).
        let j = self.weight.exponent() + self.weight.mantissa().bits() as i64;
        Some(j + self.k_n_given as i64)
    }
}

fn ceil_log2(x: u64) -> i64 {
    debug_assert!(x > 0);
    (64 - (x - 1).leading_zeros()) as i64
}

pub fn verify_counting_bound(u: &UniversalCatalog, inst: &CountingInstance, c: i64) -> CountingVerdict {
    LemmaProfile::compute(u, &inst.sigma, inst.n).verdict(inst.r, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProofRouteVerdict {
    pub k_n_given: usize,
    pub c_used: i64,
    pub holds: bool,
}

pub fn verify_proof_route(u: &UniversalCatalog, sigma: &BitString, n: usize, c: i64) -> ProofRouteVerdict {
    let p = LemmaProfile::compute(u, sigma, n);
    ProofRouteVerdict {
        k_n_given: p.k_n_given,
        c_used: c,
        holds: p.proof_route_holds(c),
    }
}

/// The grid ranges; all inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub sigma_len: (usize, usize),
    pub n: (usize, usize),
    pub r: (i64, i64),
    #[serde(default)]
    pub floor: i64,
}

impl Grid {
    pub fn new(sigma_len: (usize, usize), n: (usize, usize), r: (i64, i64)) -> Self {
        Grid {
            sigma_len,
            n,
            r,
            floor: 0,
        }
    }

    /// The standard regression grid: `|σ| ≤ 4, n ≤ 10, 0 ≤ r ≤ 4`.
    pub fn standard() -> Self {
        Grid::new((0, 4), (0, 10), (0, 4))
    }

    pub fn load(path: &Path) -> Result<Self, GridError> {
        let text = std::fs::read_to_string(path).map_err(|e| GridError(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| GridError(e.to_string()))
    }

    /// `(σ, n)` pairs in canonical order: `σ` length-lex, then `n`.
    pub fn pairs(&self) -> Vec<(BitString, usize)> {
        (self.sigma_len.0..=self.sigma_len.1)
            .flat_map(BitString::all_of_length)
            .flat_map(|s| {
                let lo = self.n.0.max(s.len() + 1);
                (lo..=self.n.1).map(move |n| (s.clone(), n))
            })
            .collect()
    }

    pub fn instances(&self) -> Vec<CountingInstance> {
        self.pairs()
            .into_iter()
            .flat_map(|(s, n)| (self.r.0..=self.r.1).map(move |r| CountingInstance::new(s.clone(), n, r)))
            .collect()
    }
}

#[derive(Debug, Error)]
#[error("grid file: {0}")]
pub struct GridError(String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingConstants {
    /// Least `c ≥ floor` validating the lemma display alone.
    pub lemma_only: i64,
    /// Least `c ≥ floor` validating the strict proof inequality.
    pub proof_route: i64,
    /// Least `c ≥ floor` validating both; the reported constant.
    pub c: i64,
}

fn profiles(u: &UniversalCatalog, grid: &Grid) -> Vec<LemmaProfile> {
    grid.pairs()
        .par_iter()
        .map(|(s, n)| LemmaProfile::compute(u, s, *n))
        .collect()
}

pub fn counting_constants(u: &UniversalCatalog, grid: &Grid) -> CountingConstants {
    constants_from(&profiles(u, grid), grid)
}

fn constants_from(profiles: &[LemmaProfile], grid: &Grid) -> CountingConstants {
    let lemma_only = profiles
        .iter()
        .flat_map(|p| (grid.r.0..=grid.r.1).filter_map(|r| p.least_lemma_constant(r)))
        .fold(grid.floor, i64::max);
    let proof_route = profiles
        .iter()
        .filter_map(LemmaProfile::least_proof_constant)
        .fold(grid.floor, i64::max);
    CountingConstants {
        lemma_only,
        proof_route,
        c: lemma_only.max(proof_route),
    }
}

/// The least `c` (at least the grid floor) under which every grid instance
/// satisfies the counting bound, checked through the proof inequality as
/// well as directly.
pub fn min_counting_constant(u: &UniversalCatalog, grid: &Grid) -> i64 {
    counting_constants(u, grid).c
}

#[derive(Debug, Clone, Serialize)]
pub struct GridRow {
    pub instance: CountingInstance,
    pub verdict: CountingVerdict,
    pub proof_route_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridRun {
    pub constants: CountingConstants,
    pub rows: Vec<GridRow>,
}

impl GridRun {
    pub fn violations(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| !r.verdict.holds || !r.proof_route_holds)
            .count()
    }
}

/// Computes the constants and evaluates every instance at the reported `c`.
pub fn run_grid(u: &UniversalCatalog, grid: &Grid) -> GridRun {
    let profiles = profiles(u, grid);
    let constants = constants_from(&profiles, grid);
    let rows = profiles
        .iter()
        .flat_map(|p| {
            let c = constants.c;
            (grid.r.0..=grid.r.1).map(move |r| GridRow {
                instance: CountingInstance::new(p.sigma.clone(), p.n, r),
                verdict: p.verdict(r, c),
                proof_route_holds: p.proof_route_holds(c),
            })
        })
        .collect();
    GridRun { constants, rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorollaryReading {
    /// Each counted `τ` is held to the bound with its own `K(σ|τ*)`.
    PerTau,
    /// The bound uses the least `K(σ|τ*)` over counted `τ`.
    ExtremalMin,
}

/// `|{τ ⊇ σ : |τ| = n, K(τ) ≤ n − r}|` against
/// `2^{n − K(σ) + c − r − K(σ|τ*) − K(n|σ*)}` under the chosen reading of the
/// `τ`-dependent term. With nothing counted the term is taken as 0.
pub fn verify_extension_count(
    u: &UniversalCatalog,
    inst: &CountingInstance,
    c: i64,
    reading: CorollaryReading,
) -> CountingVerdict {
    let threshold = inst.n as i64 - inst.r;
    let star = u.shortest_desc(&inst.sigma);
    let k_sigma = u.k(&inst.sigma) as i64;
    let k_n_given = u.k_given(&nat_to_string(inst.n as u64), &star) as i64;
    let counted: Vec<BitString> = inst
        .extensions()
        .filter(|t| u.k(t) as i64 <= threshold)
        .collect();
    let back_terms = counted
        .iter()
        .map(|t| u.k_given(&inst.sigma, &u.shortest_desc(t)) as i64);
    let term = match reading {
        CorollaryReading::PerTau => back_terms.max(),
        CorollaryReading::ExtremalMin => back_terms.min(),
    }
    .unwrap_or(0);
    let e = inst.n as i64 - k_sigma + c - inst.r - term - k_n_given;
    CountingVerdict::new(counted.len() as u64, DyadicWeight::pow2(e), c)
}

/// Least `c ≥ floor` under which every grid instance satisfies the corollary
/// bound in the given reading, with the number of instances that count anything.
pub fn corollary_constant(u: &UniversalCatalog, grid: &Grid, reading: CorollaryReading) -> (i64, usize) {
    let needed: Vec<Option<i64>> = grid
        .instances()
        .par_iter()
        .map(|inst| {
            let v = verify_extension_count(u, inst, 0, reading);
            (v.lhs_count > 0).then(|| ceil_log2(v.lhs_count) - v.rhs_bound.exponent())
        })
        .collect();
    let nonempty = needed.iter().flatten().count();
    (needed.into_iter().flatten().fold(grid.floor, i64::max), nonempty)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub max_defect: u64,
    pub argmax: (BitString, BitString),
}

/// `|K(τ) + K(σ|τ*) − K(σ) − K(τ|σ*)|` for one pair.
pub fn symmetry_defect(u: &UniversalCatalog, sigma: &BitString, tau: &BitString) -> u64 {
    let lhs = u.k(tau) + u.k_given(sigma, &u.shortest_desc(tau));
    let rhs = u.k(sigma) + u.k_given(tau, &u.shortest_desc(sigma));
    lhs.abs_diff(rhs) as u64
}

/// Maximum defect over all pairs with `|σ|, |τ| ≤ max_len`; the first pair in
/// length-lex order attaining it is the witness.
pub fn symmetry_profile(u: &UniversalCatalog, max_len: usize) -> DefectReport {
    let strings: Vec<BitString> = BitString::all_up_to(max_len).collect();
    let defects: Vec<(u64, usize, usize)> = (0..strings.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let strings = &strings;
            (0..strings.len()).map(move |j| (symmetry_defect(u, &strings[i], &strings[j]), i, j))
        })
        .collect();
    let (max_defect, i, j) = defects
        .into_iter()
        .fold((0, 0, 0), |best, cur| if cur.0 > best.0 { cur } else { best });
    DefectReport {
        max_defect,
        argmax: (strings[i].clone(), strings[j].clone()),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no extension of {sigma} by at most {max_extension} bits has K > length")]
pub struct SearchExhausted {
    pub sigma: BitString,
    pub max_extension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncompressibleExtension {
    pub tau: BitString,
    pub extension_len: usize,
    pub k_tau: usize,
    pub k_sigma: usize,
}

impl IncompressibleExtension {
    /// `|τ| − |σ| < 2^{c+|σ|} − 1`.
    pub fn within_length_bound(&self, c: u32) -> bool {
        let sigma_len = self.tau.len() - self.extension_len;
        DyadicWeight::from_count(self.extension_len as u64 + 1) < DyadicWeight::pow2(c as i64 + sigma_len as i64)
    }

    /// `|τ| − |σ| ≤ 2^{c + |σ| − K(σ)}`, the deficiency-sized search interval.
    pub fn within_deficiency_bound(&self, c: u32) -> bool {
        DyadicWeight::from_count(self.extension_len as u64) <= DyadicWeight::pow2(self.deficiency_exponent(c))
    }

    pub fn deficiency_exponent(&self, c: u32) -> i64 {
        let sigma_len = (self.tau.len() - self.extension_len) as i64;
        c as i64 + sigma_len - self.k_sigma as i64
    }
}

/// The length-lexicographically least `τ ⊇ σ` with `K(τ) > |τ|`, searching
/// extensions of up to `max_extension` extra bits.
pub fn find_incompressible_extension(
    u: &UniversalCatalog,
    sigma: &BitString,
    max_extension: usize,
) -> Result<IncompressibleExtension, SearchExhausted> {
    for extension_len in 0..=max_extension {
        for suffix in BitString::all_of_length(extension_len) {
            let tau = sigma.concat(&suffix);
            let k_tau = u.k(&tau);
            if k_tau > tau.len() {
                return Ok(IncompressibleExtension {
                    tau,
                    extension_len,
                    k_tau,
                    k_sigma: u.k(sigma),
                });
            }
        }
    }
    Err(SearchExhausted {
        sigma: sigma.clone(),
        max_extension,
    })
}
