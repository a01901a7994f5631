//! Axiom-set files: one `oracle input output` line per axiom.
//!
//! The oracle is written in ASCII digits. The empty oracle may be written as
//! `λ` or left out (a line with only two fields). `#` starts a comment.

use std::path::Path;

use thiserror::Error;

use super::axioms::{validate, Axiom, FunctionalAxiomSet, NormalizeReport};
use crate::bitcore::BitString;

#[derive(Debug, Error)]
pub enum AxiomFileError {
    #[error("cannot read axiom file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid functional: {0}")]
    Invalid(#[from] NormalizeReport),
}

pub fn parse_axioms(text: &str) -> Result<Vec<Axiom>, AxiomFileError> {
    let mut axioms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| AxiomFileError::Syntax {
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (oracle, input, output) = match fields.as_slice() {
            [o, n, r] => (*o, *n, *r),
            [n, r] => ("", *n, *r),
            _ => return Err(syntax(format!("expected 'oracle input output', got {line:?}"))),
        };
        let oracle: BitString = oracle.parse().map_err(|e| syntax(format!("{e}")))?;
        let input = input
            .parse()
            .map_err(|e| syntax(format!("bad input {input:?}: {e}")))?;
        let output = output
            .parse()
            .map_err(|e| syntax(format!("bad output {output:?}: {e}")))?;
        axioms.push(Axiom::new(oracle, input, output));
    }
    Ok(axioms)
}

/// Parses, checks consistency, and normalizes.
pub fn load_functional(path: &Path) -> Result<FunctionalAxiomSet, AxiomFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| AxiomFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(validate(parse_axioms(&text)?)?)
}

pub fn render_axioms(phi: &FunctionalAxiomSet) -> String {
    phi.axioms()
        .iter()
        .map(|a| {
            let oracle = if a.oracle.is_empty() {
                "λ".to_string()
            } else {
                a.oracle.to_string()
            };
            format!("{oracle} {} {}\n", a.input, a.output)
        })
        .collect()
}
