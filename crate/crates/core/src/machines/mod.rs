//! Prefix-free machines, the finite universal catalog, and exact complexity.

mod catalog;
mod config;
mod machine;

pub use catalog::{header, ComplexityReport, UniversalCatalog};
pub use config::{CatalogError, CatalogFile, MachineEntry};
pub use machine::{ConditionalMachine, Machine, MachineError, TableMachine};
