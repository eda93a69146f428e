//! Config file layer. Precedence: flags, then the file, then defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use ising_core::dataset::{BinLabel, SplitCounts, SplitTriple};
use ising_core::metropolis::StartPolicy;
use ising_core::BoundaryCondition;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub lattice: LatticeSection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub dataset: DatasetSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub boundary: Option<String>,
    pub coupling: Option<f64>,
    pub field: Option<f64>,
    pub size: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub temperature: Option<f64>,
    pub sweeps: Option<usize>,
    pub seed: Option<u64>,
    pub start: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSection {
    pub root: Option<PathBuf>,
    pub seed: Option<u64>,
    pub size: Option<String>,
    pub sweeps: Option<usize>,
    pub temperature_step: Option<f64>,
    pub start: Option<String>,
    pub jobs: Option<usize>,
    pub only_bc: Option<Vec<String>>,
    pub allow_replicates: Option<bool>,
    /// Per-bin `{ train, validation, test }` tables, keyed by bin name.
    pub split_counts: Option<BTreeMap<String, SplitTriple>>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))
    }
}

pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn parse_size(flag: &str, s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("{flag}: expected ROWSxCOLS or N, got {s:?}"));
    let (r, c) = match s.split_once(['x', 'X']) {
        Some((r, c)) => (r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if r < 2 || c < 2 {
        return Err(CliError::Usage(format!("{flag}: lattice must be at least 2x2, got {s:?}")));
    }
    Ok((r, c))
}

pub fn parse_boundary(flag: &str, s: &str) -> Result<BoundaryCondition, CliError> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("{flag}: unknown boundary condition {s:?} (periodic, antiperiodic, skewed)")))
}

pub fn parse_start(flag: &str, s: &str) -> Result<StartPolicy, CliError> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("{flag}: unknown start policy {s:?} (auto, hot, ordered)")))
}

pub fn parse_split_counts(table: &BTreeMap<String, SplitTriple>) -> Result<SplitCounts, CliError> {
    let mut counts = BTreeMap::new();
    for (name, triple) in table {
        let bin: BinLabel = name
            .parse()
            .map_err(|_| CliError::Usage(format!("[dataset.split_counts]: unknown bin {name:?}")))?;
        counts.insert(bin, *triple);
    }
    Ok(SplitCounts(counts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_size("--size", "100x100").unwrap(), (100, 100));
        assert_eq!(parse_size("--size", "8X12").unwrap(), (8, 12));
        assert_eq!(parse_size("--size", "64").unwrap(), (64, 64));
        assert!(parse_size("--size", "1x5").is_err());
        assert!(parse_size("--size", "axb").is_err());
    }

    #[test]
    fn precedence() {
        assert_eq!(pick(Some(1), Some(2), 3), 1);
        assert_eq!(pick(None, Some(2), 3), 2);
        assert_eq!(pick(None::<i32>, None, 3), 3);
    }

    #[test]
    fn file_sections_parse() {
        let cfg: FileConfig = toml::from_str(
            r#"
            [lattice]
            boundary = "skewed"
            size = "32x32"

            [simulation]
            temperature = 2.5
            seed = 4

            [dataset]
            root = "corpus"
            only_bc = ["periodic"]

            [dataset.split_counts]
            CR = { train = 3, validation = 1, test = 1 }
            "#,
        )
        .unwrap();
        assert_eq!(cfg.lattice.boundary.as_deref(), Some("skewed"));
        assert_eq!(cfg.simulation.temperature, Some(2.5));
        let counts = parse_split_counts(cfg.dataset.split_counts.as_ref().unwrap()).unwrap();
        assert_eq!(counts.total(), 5);
        assert!(toml::from_str::<FileConfig>("[lattice]\nbogus = 1\n").is_err());
    }
}
