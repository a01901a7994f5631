use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::machine::{Machine, MachineError};
use crate::bitcore::{encode_literal, BitString};

/// The unary header `0^i 1` addressing machine `i`.
pub fn header(index: usize) -> BitString {
    let mut h = BitString::repeat(false, index);
    h.push(true);
    h
}

/// A finite catalog `M_0, M_1, …, M_k` acting as the universal machine
/// `U(0^i 1 p) = M_i(p)`. `M_0` is always the literal machine.
#[derive(Debug, Clone)]
pub struct UniversalCatalog {
    id: String,
    machines: Vec<Arc<Machine>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityReport {
    pub subject: BitString,
    pub k: usize,
    pub witness_program: BitString,
    pub condition: Option<BitString>,
}

impl ComplexityReport {
    /// Index of the catalog machine the witness runs on.
    pub fn machine_index(&self) -> usize {
        self.witness_program
            .bits()
            .iter()
            .position(|&b| b)
            .expect("witness carries a header")
    }
}

impl UniversalCatalog {
    /// The catalog holding only the literal machine.
    pub fn base() -> Self {
        Self::with_id("base")
    }

    pub fn with_id(id: impl Into<String>) -> Self {
        UniversalCatalog {
            id: id.into(),
            machines: vec![Arc::new(Machine::Literal)],
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    pub fn len(&self) -> usize {
        self.machines.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn machines(&self) -> impl Iterator<Item = &Machine> {
        self.machines.iter().map(|m| m.as_ref())
    }

    pub fn machine(&self, index: usize) -> Option<&Machine> {
        self.machines.get(index).map(|m| m.as_ref())
    }

    /// Header cost of the next appended machine, i.e. the simulation
    /// constant `d` it would realize.
    pub fn next_header_cost(&self) -> usize {
        self.machines.len() + 1
    }

    /// Appends `machine`, returning the new catalog and its realized `d`.
    /// Table machines are validated at construction, so this cannot fail.
    pub fn extend(&self, machine: Machine) -> (UniversalCatalog, usize) {
        let d = self.next_header_cost();
        let mut machines = self.machines.clone();
        machines.push(Arc::new(machine));
        let id = format!("{}+{}", self.id, machines.len() - 1);
        (UniversalCatalog { id, machines }, d)
    }

    /// Validates `entries` as a table machine and appends it.
    pub fn extend_table(
        &self,
        entries: Vec<(BitString, BitString)>,
    ) -> Result<(UniversalCatalog, usize), MachineError> {
        Machine::table(entries).map(|m| self.extend(m))
    }

    pub fn run(&self, program: &BitString, condition: Option<&BitString>) -> Option<BitString> {
        let index = program.bits().iter().position(|&b| b)?;
        let machine = self.machines.get(index)?;
        let rest = program.slice(index + 1, program.len());
        machine.run(&rest, condition)
    }

    /// Every unconditional program `σ` with `U(σ) = output`, in
    /// length-lexicographic order.
    pub fn programs_for(&self, output: &BitString) -> Vec<BitString> {
        let mut out = Vec::new();
        for (i, m) in self.machines.iter().enumerate() {
            match m.as_ref() {
                Machine::Literal => out.push(header(i).concat(&encode_literal(output))),
                Machine::Table(t) => {
                    out.extend(t.programs_for(output).iter().map(|p| header(i).concat(p)))
                }
                Machine::Conditional(_) => {}
            }
        }
        out.sort_by(|a, b| a.length_lex_cmp(b));
        out
    }

    /// Exact `K_U(x | condition)`.
    ///
    /// Every machine's shortest description of `x` is found directly from its
    /// table (or the literal code), and the global minimum is taken under
    /// length-then-lexicographic order on the full program. Since headers are
    /// distinct, lexicographic order on full programs also orders by catalog
    /// index among equal bodies.
    pub fn k_of(&self, x: &BitString, condition: Option<&BitString>) -> ComplexityReport {
        let mut best: Option<BitString> = None;
        let mut offer = |candidate: BitString| match &best {
            Some(b) if b.length_lex_cmp(&candidate).is_le() => {}
            _ => best = Some(candidate),
        };
        for (i, m) in self.machines.iter().enumerate() {
            match m.as_ref() {
                Machine::Literal => offer(header(i).concat(&encode_literal(x))),
                Machine::Table(t) => {
                    if let Some(p) = t.programs_for(x).first() {
                        offer(header(i).concat(p));
                    }
                }
                Machine::Conditional(c) => {
                    if let Some(p) = condition
                        .and_then(|cond| c.table_for(cond))
                        .and_then(|t| t.programs_for(x).first())
                    {
                        offer(header(i).concat(p));
                    }
                }
            }
        }
        let witness_program = best.expect("the literal machine describes everything");
        ComplexityReport {
            subject: x.clone(),
            k: witness_program.len(),
            witness_program,
            condition: condition.cloned(),
        }
    }

    pub fn k(&self, x: &BitString) -> usize {
        self.k_of(x, None).k
    }

    pub fn k_given(&self, x: &BitString, condition: &BitString) -> usize {
        self.k_of(x, Some(condition)).k
    }

    /// `σ*`: the canonical shortest unconditional description.
    pub fn shortest_desc(&self, x: &BitString) -> BitString {
        self.k_of(x, None).witness_program
    }

    /// Complexity reports for every `x` with `|x| ≤ max_len`, length-lex order.
    pub fn k_table(&self, max_len: usize) -> Vec<ComplexityReport> {
        let strings: Vec<BitString> = BitString::all_up_to(max_len).collect();
        strings.par_iter().map(|x| self.k_of(x, None)).collect()
    }

    /// `K(Z↾s) − s` for `s = 0..=|Z|`.
    pub fn deficiency_profile(&self, z: &BitString) -> Vec<i64> {
        (0..=z.len())
            .map(|s| self.k(&z.prefix(s)) as i64 - s as i64)
            .collect()
    }
}
