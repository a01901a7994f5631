//! Turing functionals as explicit axiom sets, pointedness checks, and the
//! example generators.

mod axioms;
mod file;
mod generators;
mod pointed;

pub use axioms::{check_consistency, validate, Axiom, AxiomViolation, FunctionalAxiomSet, NormalizeReport};
pub use file::{load_functional, parse_axioms, render_axioms, AxiomFileError};
pub use generators::{gen_ones_counter, gen_settling_time, StageTable, StageTableError};
pub use pointed::{
    check_pointed, nonuniform_pointedness_profile, PointedFailure, PointedFailureKind, PointedSequence,
};
