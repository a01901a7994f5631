//! Exact prefix-free Kolmogorov complexity over finite machine catalogs, and
//! executable checks of pointed-computability randomness constructions.

pub mod bitcore;
pub mod machines;
pub mod functionals;
pub mod compressor;
pub mod counting;
pub mod builder;
pub mod cli;
