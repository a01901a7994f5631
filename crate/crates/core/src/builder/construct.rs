use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::schedule::{Schedule, ScheduleMode};
use crate::bitcore::BitString;
use crate::counting::{find_incompressible_extension, IncompressibleExtension, SearchExhausted};
use crate::machines::UniversalCatalog;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0:?} has no 1 to retrace from")]
pub struct RetraceError(pub BitString);

/// Cuts `tau` just before its last `1`.
pub fn retrace(tau: &BitString) -> Result<BitString, RetraceError> {
    tau.bits()
        .iter()
        .rposition(|&b| b)
        .map(|t| tau.prefix(t))
        .ok_or_else(|| RetraceError(tau.clone()))
}

/// How far round `round` had to search past `τ`, against both interval bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub tau_len: usize,
    pub extension_len: usize,
    /// `extension_len < 2^{c+|τ|} − 1`.
    pub within_length_bound: bool,
    /// `c + |τ| − K(τ)`.
    pub deficiency_exponent: i64,
    /// `extension_len ≤ 2^{deficiency_exponent}`.
    pub within_deficiency_bound: bool,
}

impl RoundRecord {
    fn new(round: usize, c: u32, ext: &IncompressibleExtension) -> Self {
        RoundRecord {
            round,
            tau_len: ext.tau.len() - ext.extension_len,
            extension_len: ext.extension_len,
            within_length_bound: ext.within_length_bound(c),
            deficiency_exponent: ext.deficiency_exponent(c),
            within_deficiency_bound: ext.within_deficiency_bound(c),
        }
    }

    fn recompute(u: &UniversalCatalog, round: usize, c: u32, tau: &BitString, rho: &BitString) -> Self {
        let ext = IncompressibleExtension {
            tau: rho.clone(),
            extension_len: rho.len().saturating_sub(tau.len()),
            k_tau: u.k(rho),
            k_sigma: u.k(tau),
        };
        RoundRecord::new(round, c, &ext)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub catalog_id: String,
    pub schedule: Schedule,
    /// `ρ_0, ρ_1, …`
    pub rhos: Vec<BitString>,
    /// `τ_1, τ_2, …`
    pub taus: Vec<BitString>,
    pub rounds: Vec<RoundRecord>,
}

impl ConstructionTrace {
    /// The longest constructed prefix of `X`.
    pub fn x(&self) -> &BitString {
        self.rhos.last().expect("a trace always holds ρ_0")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("round {round}: {source}")]
    Search { round: usize, source: SearchExhausted },
    #[error("round {round}: length {length} leaves no room to pad ρ of length {rho_len}")]
    ScheduleTooShort { round: usize, rho_len: usize, length: usize },
    #[error("round {round}: length {length} is above the cap {cap}")]
    ExceedsCap { round: usize, length: usize, cap: usize },
}

/// Runs the rounds of `schedule`: pad `ρ_{i−1}` with `1 0…0` up to `ℓ_i` to get
/// `τ_i`, then take the least incompressible extension of `τ_i` as `ρ_i`.
pub fn construct_x(
    u: &UniversalCatalog,
    schedule: &Schedule,
    max_extension: usize,
) -> Result<ConstructionTrace, ConstructError> {
    let mut lengths = Vec::with_capacity(schedule.rounds);
    let mut rhos = vec![BitString::empty()];
    let mut taus = Vec::with_capacity(schedule.rounds);
    let mut rounds = Vec::with_capacity(schedule.rounds);
    for round in 1..=schedule.rounds {
        let prev = rhos.last().unwrap();
        let length = match schedule.mode {
            ScheduleMode::Recurrence => schedule.lengths[round - 1],
            ScheduleMode::Tight => prev.len() + 2,
        };
        if length > schedule.cap {
            return Err(ConstructError::ExceedsCap {
                round,
                length,
                cap: schedule.cap,
            });
        }
        if length < prev.len() + 2 {
            return Err(ConstructError::ScheduleTooShort {
                round,
                rho_len: prev.len(),
                length,
            });
        }
        let tau = prev
            .with_bit(true)
            .concat(&BitString::repeat(false, length - prev.len() - 1));
        let ext = find_incompressible_extension(u, &tau, max_extension)
            .map_err(|source| ConstructError::Search { round, source })?;
        rounds.push(RoundRecord::new(round, schedule.c, &ext));
        lengths.push(length);
        taus.push(tau);
        rhos.push(ext.tau);
    }
    Ok(ConstructionTrace {
        catalog_id: u.id().to_string(),
        schedule: Schedule {
            lengths,
            ..schedule.clone()
        },
        rhos,
        taus,
        rounds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// The trace was built with the catalog it is checked against.
    Catalog,
    /// One more `ρ` than `τ`, and one length per `τ`.
    Shape,
    InitialEmpty,
    /// Consecutive lengths follow the schedule mode.
    Recurrence,
    /// `|τ_i| = ℓ_i`.
    Length,
    /// `ρ_{i−1} ⊊ τ_i ⊆ ρ_i`.
    Chain,
    TauFinalZero,
    /// `retrace(τ_i) = ρ_{i−1}`.
    Retrace,
    /// `X(ℓ_i − 1) = 0`.
    ZeroPosition,
    /// `K(ρ_i) > |ρ_i|`.
    Incompressible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub kind: CheckKind,
    pub index: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    /// Set for tight-mode traces, whose lengths do not follow the recurrence.
    pub deviation: bool,
    pub all_passed: bool,
    pub checks: Vec<Check>,
    pub rounds: Vec<RoundRecord>,
}

impl TraceReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// A trace together with the verdicts it was saved with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub trace: ConstructionTrace,
    pub verification: TraceReport,
}

pub fn verify_trace(u: &UniversalCatalog, trace: &ConstructionTrace) -> TraceReport {
    let check = |kind, index, passed| Check { kind, index, passed };
    let s = &trace.schedule;
    let (rhos, taus, lengths) = (&trace.rhos, &trace.taus, &s.lengths);
    let x = rhos.last().cloned().unwrap_or_default();

    let mut checks = vec![
        check(CheckKind::Catalog, 0, trace.catalog_id == u.id()),
        check(
            CheckKind::Shape,
            0,
            rhos.len() == taus.len() + 1 && lengths.len() == taus.len(),
        ),
        check(CheckKind::InitialEmpty, 0, rhos.first().is_some_and(BitString::is_empty)),
    ];
    for i in 1..=taus.len() {
        let tau = &taus[i - 1];
        let length = lengths.get(i - 1).copied();
        let (before, after) = (rhos.get(i - 1), rhos.get(i));
        let recurrence = match (s.mode, i) {
            (_, 1) => length == Some(2),
            (ScheduleMode::Recurrence, _) => lengths
                .get(i - 2)
                .and_then(|&l| Schedule::recurrence_successor(s.c, l, usize::MAX))
                .is_some_and(|l| length == Some(l)),
            (ScheduleMode::Tight, _) => before.is_some_and(|r| length == Some(r.len() + 2)),
        };
        checks.push(check(CheckKind::Recurrence, i, recurrence));
        checks.push(check(CheckKind::Length, i, length == Some(tau.len())));
        let chain = before.is_some_and(|r| r.len() < tau.len() && r.is_prefix_of(tau))
            && after.is_some_and(|r| tau.is_prefix_of(r));
        checks.push(check(CheckKind::Chain, i, chain));
        checks.push(check(
            CheckKind::TauFinalZero,
            i,
            tau.bits().last() == Some(&false),
        ));
        checks.push(check(
            CheckKind::Retrace,
            i,
            before.is_some_and(|r| retrace(tau).as_ref() == Ok(r)),
        ));
        let zero = length.is_some_and(|l| l >= 1 && x.get(l - 1) == Some(false));
        checks.push(check(CheckKind::ZeroPosition, i, zero));
    }
    let incompressible: Vec<Check> = rhos
        .par_iter()
        .enumerate()
        .map(|(i, rho)| check(CheckKind::Incompressible, i, u.k(rho) > rho.len()))
        .collect();
    checks.extend(incompressible);

    let rounds = taus
        .iter()
        .zip(rhos.iter().skip(1))
        .enumerate()
        .map(|(i, (tau, rho))| RoundRecord::recompute(u, i + 1, s.c, tau, rho))
        .collect();
    TraceReport {
        deviation: s.is_deviation(),
        all_passed: checks.iter().all(|c| c.passed),
        checks,
        rounds,
    }
}
