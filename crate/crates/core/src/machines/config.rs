//! Catalog files.
//!
//! ```toml
//! id = "demo"
//!
//! [[machine]]
//! kind = "literal"
//!
//! [[machine]]
//! kind = "table"
//! entries = [["0", "0101"], ["10", ""]]
//!
//! [[machine]]
//! kind = "conditional"
//! entries = [["01", "0", "1"]]   # condition, program, output
//! ```
//!
//! The first machine must be the literal machine; an empty list means the
//! base catalog.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::catalog::UniversalCatalog;
use super::machine::{Machine, MachineError};
use crate::bitcore::BitString;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("catalog syntax: {0}")]
    Parse(String),
    #[error("machine {0}: the literal machine must appear exactly once, at index 0")]
    LiteralPlacement(usize),
    #[error("machine {index}: {source}")]
    Machine {
        index: usize,
        source: MachineError,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MachineEntry {
    Literal,
    Table {
        #[serde(default)]
        entries: Vec<(BitString, BitString)>,
    },
    Conditional {
        #[serde(default)]
        entries: Vec<(BitString, BitString, BitString)>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogFile {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(rename = "machine", default)]
    pub machines: Vec<MachineEntry>,
}

impl CatalogFile {
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        toml::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<UniversalCatalog, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let default_id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "catalog".into());
        let file = Self::parse(&text)?;
        let mut catalog = file.build()?;
        if file.id.is_none() {
            catalog.set_id(default_id);
        }
        Ok(catalog)
    }

    pub fn build(&self) -> Result<UniversalCatalog, CatalogError> {
        let mut catalog = UniversalCatalog::with_id(self.id.clone().unwrap_or_else(|| "catalog".into()));
        for (index, entry) in self.machines.iter().enumerate() {
            let machine = match entry {
                MachineEntry::Literal if index == 0 => continue,
                MachineEntry::Literal => return Err(CatalogError::LiteralPlacement(index)),
                _ if index == 0 => return Err(CatalogError::LiteralPlacement(0)),
                MachineEntry::Table { entries } => Machine::table(entries.clone()),
                MachineEntry::Conditional { entries } => Machine::conditional(entries.clone()),
            }
            .map_err(|source| CatalogError::Machine { index, source })?;
            catalog = catalog.extend(machine).0;
        }
        if let Some(id) = &self.id {
            catalog.set_id(id.clone());
        }
        Ok(catalog)
    }

    pub fn from_catalog(catalog: &UniversalCatalog) -> Self {
        let machines = catalog
            .machines()
            .map(|m| match m {
                Machine::Literal => MachineEntry::Literal,
                Machine::Table(t) => MachineEntry::Table {
                    entries: t.entries().to_vec(),
                },
                Machine::Conditional(c) => MachineEntry::Conditional {
                    entries: c.entries().to_vec(),
                },
            })
            .collect();
        CatalogFile {
            id: Some(catalog.id().to_string()),
            machines,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("catalog serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::bs;

    #[test]
    fn loads_all_kinds() {
        let text = r#"
            id = "demo"
            [[machine]]
            kind = "literal"
            [[machine]]
            kind = "table"
            entries = [["0", "0101"], ["10", ""]]
            [[machine]]
            kind = "conditional"
            entries = [["01", "0", "1"]]
        "#;
        let u = CatalogFile::parse(text).unwrap().build().unwrap();
        assert_eq!(u.id(), "demo");
        assert_eq!(u.len(), 3);
        assert_eq!(u.k(&bs("0101")), 3);
        assert_eq!(u.run(&bs("0110"), None), Some(bs("")));
        assert_eq!(u.run(&bs("0010"), Some(&bs("01"))), Some(bs("1")));

        let again = CatalogFile::parse(&CatalogFile::from_catalog(&u).to_toml())
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(CatalogFile::from_catalog(&again), CatalogFile::from_catalog(&u));
    }

    #[test]
    fn empty_file_is_base_catalog() {
        let u = CatalogFile::parse("").unwrap().build().unwrap();
        assert_eq!(u.len(), 1);
    }

    #[test]
    fn reports_violating_pair() {
        let text = r#"
            [[machine]]
            kind = "literal"
            [[machine]]
            kind = "table"
            entries = [["0", "1"], ["00", "11"]]
        "#;
        let err = CatalogFile::parse(text).unwrap().build().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("machine 1"), "{msg}");
        assert!(msg.contains("0 is a prefix of 00"), "{msg}");
    }

    #[test]
    fn literal_must_lead() {
        let text = r#"
            [[machine]]
            kind = "table"
            entries = []
        "#;
        assert!(matches!(
            CatalogFile::parse(text).unwrap().build(),
            Err(CatalogError::LiteralPlacement(0))
        ));
        let text = "[[machine]]\nkind = \"literal\"\n[[machine]]\nkind = \"literal\"\n";
        assert!(matches!(
            CatalogFile::parse(text).unwrap().build(),
            Err(CatalogError::LiteralPlacement(1))
        ));
    }
}
