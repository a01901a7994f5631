use std::collections::HashMap;

use thiserror::Error;

use crate::bitcore::{check_prefix_free, decode_literal, BitString, PrefixViolation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("domain is not prefix-free: {shorter} is a prefix of {longer}{}", condition_suffix(.condition))]
    NotPrefixFree {
        shorter: BitString,
        longer: BitString,
        condition: Option<BitString>,
    },
    #[error("program {program} assigned two outputs: {first} and {second}")]
    Conflict {
        program: BitString,
        first: BitString,
        second: BitString,
    },
}

fn condition_suffix(c: &Option<BitString>) -> String {
    match c {
        Some(c) => format!(" (condition \"{c}\")"),
        None => String::new(),
    }
}

impl MachineError {
    fn from_violation(v: PrefixViolation, condition: Option<BitString>) -> Self {
        MachineError::NotPrefixFree {
            shorter: v.shorter,
            longer: v.longer,
            condition,
        }
    }
}

/// A finite description table with a prefix-free domain.
#[derive(Debug, Clone, Default)]
pub struct TableMachine {
    /// Sorted by program.
    entries: Vec<(BitString, BitString)>,
    lookup: HashMap<BitString, BitString>,
    /// Output → all programs describing it, length-lexicographic.
    by_output: HashMap<BitString, Vec<BitString>>,
}

impl TableMachine {
    fn new(mut entries: Vec<(BitString, BitString)>) -> Result<Self, MachineError> {
        entries.sort();
        entries.dedup();
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(MachineError::Conflict {
                    program: pair[0].0.clone(),
                    first: pair[0].1.clone(),
                    second: pair[1].1.clone(),
                });
            }
        }
        if let Some(v) = check_prefix_free(entries.iter().map(|(p, _)| p)) {
            return Err(MachineError::from_violation(v, None));
        }
        let lookup = entries.iter().cloned().collect();
        let mut by_output: HashMap<BitString, Vec<BitString>> = HashMap::new();
        for (p, out) in &entries {
            by_output.entry(out.clone()).or_default().push(p.clone());
        }
        for programs in by_output.values_mut() {
            programs.sort_by(|a, b| a.length_lex_cmp(b));
        }
        Ok(TableMachine {
            entries,
            lookup,
            by_output,
        })
    }

    pub fn entries(&self) -> &[(BitString, BitString)] {
        &self.entries
    }

    pub fn run(&self, program: &BitString) -> Option<&BitString> {
        self.lookup.get(program)
    }

    /// All programs for `output`, shortest (then lexicographically least) first.
    pub fn programs_for(&self, output: &BitString) -> &[BitString] {
        self.by_output.get(output).map_or(&[], Vec::as_slice)
    }
}

/// Description tables indexed by a condition; each condition's domain is
/// prefix-free on its own.
#[derive(Debug, Clone, Default)]
pub struct ConditionalMachine {
    /// Sorted by (condition, program).
    entries: Vec<(BitString, BitString, BitString)>,
    per_condition: HashMap<BitString, TableMachine>,
}

impl ConditionalMachine {
    fn new(mut entries: Vec<(BitString, BitString, BitString)>) -> Result<Self, MachineError> {
        entries.sort();
        entries.dedup();
        let mut grouped: HashMap<BitString, Vec<(BitString, BitString)>> = HashMap::new();
        for (cond, p, out) in &entries {
            grouped
                .entry(cond.clone())
                .or_default()
                .push((p.clone(), out.clone()));
        }
        let mut conditions: Vec<_> = grouped.keys().cloned().collect();
        conditions.sort();
        let mut per_condition = HashMap::new();
        for cond in conditions {
            let table = TableMachine::new(grouped.remove(&cond).expect("present"))
                .map_err(|e| match e {
                    MachineError::NotPrefixFree {
                        shorter, longer, ..
                    } => MachineError::NotPrefixFree {
                        shorter,
                        longer,
                        condition: Some(cond.clone()),
                    },
                    other => other,
                })?;
            per_condition.insert(cond, table);
        }
        Ok(ConditionalMachine {
            entries,
            per_condition,
        })
    }

    pub fn entries(&self) -> &[(BitString, BitString, BitString)] {
        &self.entries
    }

    pub fn table_for(&self, condition: &BitString) -> Option<&TableMachine> {
        self.per_condition.get(condition)
    }
}

/// A prefix-free machine.
#[derive(Debug, Clone)]
pub enum Machine {
    /// Decodes `1^k 0 x` to `x`; its domain is never materialized.
    Literal,
    Table(TableMachine),
    Conditional(ConditionalMachine),
}

impl Machine {
    pub fn table(entries: Vec<(BitString, BitString)>) -> Result<Machine, MachineError> {
        TableMachine::new(entries).map(Machine::Table)
    }

    /// Entries are `(condition, program, output)`.
    pub fn conditional(
        entries: Vec<(BitString, BitString, BitString)>,
    ) -> Result<Machine, MachineError> {
        ConditionalMachine::new(entries).map(Machine::Conditional)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Literal => "literal",
            Machine::Table(_) => "table",
            Machine::Conditional(_) => "conditional",
        }
    }

    /// Table entries, for the table kind only.
    pub fn entries(&self) -> Option<&[(BitString, BitString)]> {
        match self {
            Machine::Table(t) => Some(t.entries()),
            _ => None,
        }
    }

    /// Unconditional machines ignore the condition; conditional machines
    /// diverge without one.
    pub fn run(&self, program: &BitString, condition: Option<&BitString>) -> Option<BitString> {
        match self {
            Machine::Literal => decode_literal(program).ok(),
            Machine::Table(t) => t.run(program).cloned(),
            Machine::Conditional(c) => c.table_for(condition?)?.run(program).cloned(),
        }
    }
}
