use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::CliError;
use crate::bitcore::BitString;
use crate::builder::{ScheduleMode, DEFAULT_LENGTH_CAP};
use crate::counting::Grid;
use crate::functionals::StageTable;

/// One run's settings. Relative paths are taken from the config file's directory.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Catalog TOML; the bare literal catalog when absent.
    pub catalog: Option<PathBuf>,
    /// Axiom file for `build-m`.
    pub functional: Option<PathBuf>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub ktable: KtableSection,
    pub build_m: Option<BuildMSection>,
    #[serde(default)]
    pub counting: CountingSection,
    #[serde(default)]
    pub construct: ConstructSection,
    pub verify: Option<VerifySection>,
    #[serde(default)]
    pub kc: KcSection,
    pub settle: Option<SettleSection>,
    #[serde(skip)]
    base_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KtableSection {
    pub max_len: usize,
}

impl Default for KtableSection {
    fn default() -> Self {
        KtableSection { max_len: 8 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildMSection {
    /// The known prefix of `X`.
    pub x: BitString,
    #[serde(default)]
    pub c: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CountingSection {
    pub sigma_len: (usize, usize),
    pub n: (usize, usize),
    pub r: (i64, i64),
    pub floor: i64,
    pub symmetry_len: usize,
}

impl CountingSection {
    pub fn grid(&self) -> Grid {
        Grid {
            floor: self.floor,
            ..Grid::new(self.sigma_len, self.n, self.r)
        }
    }
}

impl Default for CountingSection {
    fn default() -> Self {
        let g = Grid::standard();
        CountingSection {
            sigma_len: g.sigma_len,
            n: g.n,
            r: g.r,
            floor: g.floor,
            symmetry_len: 2,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstructSection {
    pub c: u32,
    pub rounds: usize,
    pub mode: ScheduleMode,
    pub cap: usize,
    pub max_extension: usize,
}

impl Default for ConstructSection {
    fn default() -> Self {
        ConstructSection {
            c: 0,
            rounds: 3,
            mode: ScheduleMode::Recurrence,
            cap: DEFAULT_LENGTH_CAP,
            max_extension: 16,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub trace: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KcSection {
    pub sequences: usize,
    pub max_requests: usize,
    pub max_length: usize,
    /// `g(0), g(1), …` for the growth-machine demo; skipped when empty.
    pub growth: Vec<u32>,
}

impl Default for KcSection {
    fn default() -> Self {
        KcSection {
            sequences: 1000,
            max_requests: 24,
            max_length: 10,
            growth: vec![0, 1, 2, 3],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettleSection {
    /// `(stage, element)` pairs with strictly increasing stages.
    pub stages: StageTable,
    pub prefix_len: usize,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        let mut config: ExperimentConfig =
            toml::from_str(&text).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
        config.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(config)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        self.base_dir.join(p)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.resolve(&self.output_dir)
    }
}
