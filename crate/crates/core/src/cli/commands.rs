use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Cli, CliError, Command, ExperimentConfig};
use crate::bitcore::{check_prefix_free, machine_from_g, BitString, DyadicWeight, GrowthTable, KcAllocator, KcError, ShiftPolicy};
use crate::builder::{
    build_schedule, construct_x, eval_prediction, verify_trace, ConstructError, PredictionScore, ScheduleError,
    ScheduleZeroRule, TraceFile, TraceReport,
};
use crate::compressor::{verify_theorem_bound, CompressorError};
use crate::counting::{
    corollary_constant, run_grid, symmetry_profile, CorollaryReading, CountingConstants, DefectReport, Grid,
};
use crate::functionals::{check_pointed, gen_settling_time, load_functional, render_axioms, FunctionalAxiomSet};
use crate::machines::{CatalogFile, UniversalCatalog};

const MAX_KTABLE_LEN: usize = 20;
const MAX_GRID_N: usize = 20;

/// Everything the config points at, loaded and validated up front.
struct Inputs {
    config: ExperimentConfig,
    catalog: UniversalCatalog,
    functional: Option<FunctionalAxiomSet>,
    trace: Option<TraceFile>,
}

impl Inputs {
    fn load(path: &Path) -> Result<Self, CliError> {
        let config = ExperimentConfig::load(path)?;
        let catalog = match &config.catalog {
            Some(p) => CatalogFile::load(&config.resolve(p)).map_err(|e| CliError::Validation(e.to_string()))?,
            None => UniversalCatalog::base(),
        };
        let functional = config
            .functional
            .as_ref()
            .map(|p| load_functional(&config.resolve(p)).map_err(|e| CliError::Validation(e.to_string())))
            .transpose()?;
        let trace = config
            .verify
            .as_ref()
            .map(|v| {
                let p = config.resolve(&v.trace);
                let text = std::fs::read_to_string(&p)
                    .map_err(|e| CliError::Validation(format!("cannot read trace {}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("trace {}: {e}", p.display())))
            })
            .transpose()?;
        Ok(Inputs {
            config,
            catalog,
            functional,
            trace,
        })
    }
}

/// Runs one subcommand and returns the files it wrote.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let inputs = Inputs::load(&cli.config)?;
    let (outputs, verdict) = match cli.command {
        Command::Ktable => (ktable(&inputs)?, Ok(())),
        Command::BuildM => (build_m(&inputs)?, Ok(())),
        Command::Counting => (counting(&inputs)?, Ok(())),
        Command::Construct => construct(&inputs)?,
        Command::VerifyTrace => verify(&inputs)?,
        Command::KcDemo => kc_demo(&inputs)?,
        Command::Settle => (settle(&inputs)?, Ok(())),
    };
    let written = write_outputs(&inputs.config.output_dir(), outputs)?;
    verdict.map(|()| written)
}

type Outputs = Vec<(&'static str, Vec<u8>)>;

/// Writes each file beside its final name and renames it into place.
fn write_outputs(dir: &Path, outputs: Outputs) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, bytes) in outputs {
        let path = dir.join(name);
        let tmp = dir.join(format!(".{name}.tmp"));
        std::fs::write(&tmp, bytes)?;
        std::fs::rename(&tmp, &path)?;
        written.push(path);
    }
    Ok(written)
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("reports serialize");
    bytes.push(b'\n');
    bytes
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn ktable(inputs: &Inputs) -> Result<Outputs, CliError> {
    let max_len = inputs.config.ktable.max_len;
    if max_len > MAX_KTABLE_LEN {
        return Err(CliError::Resource(format!(
            "K table up to length {max_len} exceeds the limit {MAX_KTABLE_LEN}"
        )));
    }
    let rows = inputs.catalog.k_table(max_len).into_iter().map(|r| {
        vec![
            r.subject.to_string(),
            r.subject.len().to_string(),
            r.k.to_string(),
            r.machine_index().to_string(),
            r.witness_program.to_string(),
        ]
    });
    Ok(vec![(
        "ktable.csv",
        csv_bytes(&["string", "length", "k", "machine", "witness"], rows),
    )])
}

fn build_m(inputs: &Inputs) -> Result<Outputs, CliError> {
    let section = inputs
        .config
        .build_m
        .as_ref()
        .ok_or_else(|| CliError::Validation("build-m needs a [build_m] section".into()))?;
    let phi = inputs
        .functional
        .as_ref()
        .ok_or_else(|| CliError::Validation("build-m needs a functional file".into()))?;
    let report = verify_theorem_bound(&section.x, phi, &inputs.catalog, section.c).map_err(|e| match e {
        CompressorError::NotPointed(_) => CliError::Validation(e.to_string()),
        _ => CliError::Property(e.to_string()),
    })?;
    Ok(vec![("build_m.json", json(&report))])
}

#[derive(Serialize)]
struct CorollarySummary {
    constant: i64,
    nonempty_instances: usize,
}

#[derive(Serialize)]
struct CountingSummary<'a> {
    catalog: &'a str,
    grid: &'a Grid,
    instances: usize,
    constants: CountingConstants,
    violations: usize,
    symmetry_len: usize,
    symmetry: DefectReport,
    corollary_per_tau: CorollarySummary,
    corollary_extremal_min: CorollarySummary,
}

fn counting(inputs: &Inputs) -> Result<Outputs, CliError> {
    let section = &inputs.config.counting;
    let grid = section.grid();
    if grid.n.1 > MAX_GRID_N || section.symmetry_len > MAX_GRID_N / 2 {
        return Err(CliError::Resource(format!(
            "grid lengths above {MAX_GRID_N} (or symmetry length above {}) are refused",
            MAX_GRID_N / 2
        )));
    }
    let u = &inputs.catalog;
    let run = run_grid(u, &grid);
    let corollary = |reading| {
        let (constant, nonempty_instances) = corollary_constant(u, &grid, reading);
        CorollarySummary {
            constant,
            nonempty_instances,
        }
    };
    let summary = CountingSummary {
        catalog: u.id(),
        grid: &grid,
        instances: run.rows.len(),
        constants: run.constants.clone(),
        violations: run.violations(),
        symmetry_len: section.symmetry_len,
        symmetry: symmetry_profile(u, section.symmetry_len),
        corollary_per_tau: corollary(CorollaryReading::PerTau),
        corollary_extremal_min: corollary(CorollaryReading::ExtremalMin),
    };
    let rows = run.rows.iter().map(|row| {
        let rhs = &row.verdict.rhs_bound;
        vec![
            row.instance.sigma.to_string(),
            row.instance.n.to_string(),
            row.instance.r.to_string(),
            row.verdict.lhs_count.to_string(),
            rhs.mantissa().to_string(),
            rhs.exponent().to_string(),
            row.verdict.c_used.to_string(),
            row.verdict.holds.to_string(),
            row.proof_route_holds.to_string(),
        ]
    });
    let header = [
        "sigma",
        "n",
        "r",
        "lhs",
        "rhs_mantissa",
        "rhs_exponent",
        "c",
        "holds",
        "proof_route_holds",
    ];
    if summary.violations > 0 {
        return Err(CliError::Property(format!("{} grid instances fail", summary.violations)));
    }
    Ok(vec![
        ("counting.csv", csv_bytes(&header, rows)),
        ("counting_summary.json", json(&summary)),
    ])
}

type Verdict = Result<(), CliError>;

#[derive(Serialize)]
struct ConstructOutput<'a> {
    #[serde(flatten)]
    file: &'a TraceFile,
    prediction: PredictionScore,
}

fn construct(inputs: &Inputs) -> Result<(Outputs, Verdict), CliError> {
    let s = &inputs.config.construct;
    let schedule = build_schedule(s.c, s.rounds, s.mode, s.cap).map_err(|e| match e {
        ScheduleError::ExceedsCap { .. } => CliError::Resource(e.to_string()),
        ScheduleError::NoRounds => CliError::Validation(e.to_string()),
    })?;
    let trace = construct_x(&inputs.catalog, &schedule, s.max_extension).map_err(|e| match e {
        ConstructError::ExceedsCap { .. } => CliError::Resource(e.to_string()),
        _ => CliError::Property(e.to_string()),
    })?;
    let verification = verify_trace(&inputs.catalog, &trace);
    let prediction = eval_prediction(&ScheduleZeroRule::new(&trace.schedule.lengths), trace.x());
    let verdict = trace_verdict(&verification, prediction.correct == prediction.defined);
    let file = TraceFile { trace, verification };
    let out = ConstructOutput {
        file: &file,
        prediction,
    };
    Ok((vec![("trace.json", json(&out))], verdict))
}

fn trace_verdict(report: &TraceReport, replay_ok: bool) -> Verdict {
    let failed: Vec<String> = report
        .failures()
        .map(|c| format!("{:?}@{}", c.kind, c.index))
        .collect();
    if !failed.is_empty() {
        Err(CliError::Property(format!("trace checks failed: {}", failed.join(", "))))
    } else if !replay_ok {
        Err(CliError::Property("trace verdicts differ from the saved ones".into()))
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    replay_matches: bool,
    verification: TraceReport,
    prediction: PredictionScore,
}

fn verify(inputs: &Inputs) -> Result<(Outputs, Verdict), CliError> {
    let saved = inputs
        .trace
        .as_ref()
        .ok_or_else(|| CliError::Validation("verify-trace needs a [verify] section".into()))?;
    let verification = verify_trace(&inputs.catalog, &saved.trace);
    let replay_matches = verification == saved.verification;
    let prediction = eval_prediction(&ScheduleZeroRule::new(&saved.trace.schedule.lengths), saved.trace.x());
    let verdict = trace_verdict(&verification, replay_matches);
    let out = VerifyOutput {
        replay_matches,
        verification,
        prediction,
    };
    Ok((vec![("verify.json", json(&out))], verdict))
}

#[derive(Serialize)]
struct GrowthDemo {
    g: Vec<u32>,
    raw_weight: DyadicWeight,
    shift: u32,
    codewords: usize,
    lengths_exact: bool,
    prefix_free: bool,
}

#[derive(Serialize)]
struct KcReport {
    seed: u64,
    sequences: usize,
    accepted: usize,
    rejected: usize,
    /// Sessions whose outcome disagrees with the running Kraft sum.
    mismatches: usize,
    growth: Option<GrowthDemo>,
}

/// Plays one request sequence: whether every request was met, and whether the
/// outcome agrees with the running Kraft sum and yields a prefix-free code.
fn kc_session(lengths: &[usize]) -> (bool, bool) {
    let mut alloc = KcAllocator::new();
    let mut total = DyadicWeight::zero();
    let mut issued = Vec::new();
    for (i, &len) in lengths.iter().enumerate() {
        total += &DyadicWeight::pow2(-(len as i64));
        let expect_reject = !total.le_one();
        match alloc.request(len) {
            Ok(w) => {
                if expect_reject || w.len() != len {
                    return (false, false);
                }
                issued.push(w);
            }
            Err(KcError::Overweight { index, .. }) => return (false, expect_reject && index == i),
            Err(_) => return (false, false),
        }
    }
    (true, check_prefix_free(issued.iter()).is_none())
}

fn kc_demo(inputs: &Inputs) -> Result<(Outputs, Verdict), CliError> {
    let s = &inputs.config.kc;
    if s.max_length == 0 || s.max_requests == 0 {
        return Err(CliError::Validation("kc lengths and request counts must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(inputs.config.seed);
    let (mut accepted, mut rejected, mut mismatches) = (0, 0, 0);
    for _ in 0..s.sequences {
        let count = rng.random_range(1..=s.max_requests);
        let lengths: Vec<usize> = (0..count).map(|_| rng.random_range(1..=s.max_length)).collect();
        let (complete, consistent) = kc_session(&lengths);
        if complete {
            accepted += 1;
        } else {
            rejected += 1;
        }
        if !consistent {
            mismatches += 1;
        }
    }
    let growth = if s.growth.is_empty() {
        None
    } else {
        let g = GrowthTable::new(s.growth.clone());
        let m = machine_from_g(&g, ShiftPolicy::Least).map_err(|e| CliError::Property(e.to_string()))?;
        let entries = m.machine.entries().unwrap_or(&[]);
        Some(GrowthDemo {
            g: s.growth.clone(),
            raw_weight: m.raw_weight.clone(),
            shift: m.shift,
            codewords: entries.len(),
            lengths_exact: entries
                .iter()
                .all(|(p, x)| p.len() == x.len() + g.g(x.len()) as usize + m.shift as usize),
            prefix_free: check_prefix_free(entries.iter().map(|(p, _)| p)).is_none(),
        })
    };
    let growth_ok = growth.as_ref().is_none_or(|d| d.lengths_exact && d.prefix_free);
    let verdict = if mismatches > 0 || !growth_ok {
        Err(CliError::Property(format!(
            "{mismatches} Kraft–Chaitin sessions disagree with the weight oracle"
        )))
    } else {
        Ok(())
    };
    let report = KcReport {
        seed: inputs.config.seed,
        sequences: s.sequences,
        accepted,
        rejected,
        mismatches,
        growth,
    };
    Ok((vec![("kc.json", json(&report))], verdict))
}

#[derive(Serialize)]
struct SettleReport {
    x: BitString,
    final_set: Vec<usize>,
    settling_sequence: Vec<usize>,
    axioms: usize,
    pointed: Option<Vec<usize>>,
    pointed_failure: Option<String>,
}

fn settle(inputs: &Inputs) -> Result<Outputs, CliError> {
    let s = inputs
        .config
        .settle
        .as_ref()
        .ok_or_else(|| CliError::Validation("settle needs a [settle] section".into()))?;
    let x = s.stages.characteristic_prefix(s.prefix_len);
    let phi = gen_settling_time(&s.stages, &x);
    let pointed = check_pointed(&phi, &x);
    let report = SettleReport {
        final_set: s.stages.final_set().into_iter().collect(),
        settling_sequence: s.stages.settling_sequence(s.prefix_len),
        axioms: phi.len(),
        pointed: pointed.as_ref().ok().map(|p| p.values.clone()),
        pointed_failure: pointed.as_ref().err().map(ToString::to_string),
        x,
    };
    Ok(vec![
        ("settle.json", json(&report)),
        ("settle_axioms.txt", render_axioms(&phi).into_bytes()),
    ])
}
