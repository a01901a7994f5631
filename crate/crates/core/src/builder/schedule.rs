use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Longest checkpoint length a schedule may contain unless configured otherwise.
pub const DEFAULT_LENGTH_CAP: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleMode {
    /// `ℓ_1 = 2`, `ℓ_{i+1} = ℓ_i + 2^{c+ℓ_i}`.
    Recurrence,
    /// `ℓ_{i+1} = |ρ_i| + 2`, fixed only as the construction runs. A
    /// deviation from the recurrence, kept to reach more rounds.
    Tight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub c: u32,
    pub mode: ScheduleMode,
    pub rounds: usize,
    /// `ℓ_1, ℓ_2, …`. Complete in recurrence mode; in tight mode only `ℓ_1` until
    /// a construction fills in the rest.
    pub lengths: Vec<usize>,
    pub cap: usize,
}

impl Schedule {
    pub fn is_deviation(&self) -> bool {
        self.mode == ScheduleMode::Tight
    }

    /// `ℓ_{round}`, 1-based.
    pub fn length(&self, round: usize) -> Option<usize> {
        round.checked_sub(1).and_then(|i| self.lengths.get(i).copied())
    }

    /// The recurrence successor of `ℓ`, if it stays within `cap`.
    pub fn recurrence_successor(c: u32, l: usize, cap: usize) -> Option<usize> {
        let exponent = (c as usize).checked_add(l)?;
        if exponent >= usize::BITS as usize {
            return None;
        }
        l.checked_add(1 << exponent).filter(|&n| n <= cap)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("round {round} needs length {length}, above the cap {cap}")]
    ExceedsCap { round: usize, length: String, cap: usize },
    #[error("a schedule needs at least one round")]
    NoRounds,
}

pub fn build_schedule(c: u32, rounds: usize, mode: ScheduleMode, cap: usize) -> Result<Schedule, ScheduleError> {
    if rounds == 0 {
        return Err(ScheduleError::NoRounds);
    }
    if cap < 2 {
        return Err(ScheduleError::ExceedsCap {
            round: 1,
            length: "2".into(),
            cap,
        });
    }
    let mut lengths = vec![2usize];
    if mode == ScheduleMode::Recurrence {
        for round in 2..=rounds {
            let l = *lengths.last().unwrap();
            match Schedule::recurrence_successor(c, l, cap) {
                Some(next) => lengths.push(next),
                None => {
                    let exponent = c as usize + l;
                    let length = if exponent < 128 {
                        (BigUint::from(l) + (BigUint::from(1u8) << exponent)).to_string()
                    } else {
                        format!("2^{exponent} + {l}")
                    };
                    return Err(ScheduleError::ExceedsCap { round, length, cap });
                }
            }
        }
    }
    Ok(Schedule {
        c,
        mode,
        rounds,
        lengths,
        cap,
    })
}
