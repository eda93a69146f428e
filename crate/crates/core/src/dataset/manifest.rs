use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::bins::{BinEdges, BinLabel, Split, SplitCounts, TemperatureGrid, DEFAULT_BIN_EDGES};
use crate::error::{Error, Result};
use crate::lattice::{BoundaryCondition, LatticeSpec};
use crate::metropolis::{StartPolicy, DEFAULT_THERMALIZATION_SWEEPS};
use crate::rng::derive_seed;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const GENERATOR: &str = concat!("ising-core ", env!("CARGO_PKG_VERSION"));

pub const DEFAULT_LATTICE_SIZE: usize = 100;
pub const DEFAULT_TEMPERATURE_STEP: f64 = 0.01;
pub const DEFAULT_IMAGES_PER_CONDITION: usize = 1300;

/// The four corpora: periodic ferro- and anti-ferromagnet, skewed and
/// anti-periodic ferromagnets.
pub const DEFAULT_CONDITIONS: [(BoundaryCondition, f64); 4] = [
    (BoundaryCondition::Periodic, 1.0),
    (BoundaryCondition::Periodic, -1.0),
    (BoundaryCondition::SkewedPlusMinus, 1.0),
    (BoundaryCondition::AntiPeriodic, 1.0),
];

/// Directory and record name of a corpus, e.g. `periodic-ferro`.
pub fn condition_name(spec: &LatticeSpec) -> String {
    let kind = if spec.coupling > 0.0 { "ferro" } else { "antiferro" };
    format!("{}-{kind}", spec.boundary)
}

/// Stable integer folded into every image seed of a corpus.
pub fn condition_code(spec: &LatticeSpec) -> u64 {
    let bc = match spec.boundary {
        BoundaryCondition::Periodic => 0,
        BoundaryCondition::AntiPeriodic => 1,
        BoundaryCondition::SkewedPlusMinus => 2,
    };
    2 * bc + u64::from(spec.coupling < 0.0)
}

pub fn image_seed(base_seed: u64, spec: &LatticeSpec, temperature_index: u32, replicate: u32) -> u64 {
    derive_seed(
        base_seed,
        &[condition_code(spec), temperature_index as u64, replicate as u64],
    )
}

/// Generation settings for one boundary condition's corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub spec: LatticeSpec,
    pub base_seed: u64,
    pub temperature_step: f64,
    pub images_per_condition: usize,
    pub split_counts: SplitCounts,
    pub thermalization_sweeps: usize,
    pub start: StartPolicy,
    pub allow_replicates: bool,
    pub bin_edges: BinEdges,
    #[serde(skip)]
    pub output_root: PathBuf,
}

impl DatasetConfig {
    /// Defaults: 100x100 lattice, 0.01 step, 1300 images split per bin as
    /// 220/100/150, 80/50/50, 90/60/70, 210/90/130.
    pub fn new(boundary: BoundaryCondition, coupling: f64, output_root: impl Into<PathBuf>) -> Result<Self> {
        Ok(DatasetConfig {
            spec: LatticeSpec::new(DEFAULT_LATTICE_SIZE, DEFAULT_LATTICE_SIZE, boundary, coupling)?,
            base_seed: 0,
            temperature_step: DEFAULT_TEMPERATURE_STEP,
            images_per_condition: DEFAULT_IMAGES_PER_CONDITION,
            split_counts: SplitCounts::table_defaults(),
            thermalization_sweeps: DEFAULT_THERMALIZATION_SWEEPS,
            start: StartPolicy::Auto,
            allow_replicates: true,
            bin_edges: DEFAULT_BIN_EDGES,
            output_root: output_root.into(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        self.bin_edges.validate()?;
        TemperatureGrid::new(self.temperature_step)?;
        if self.split_counts.total() != self.images_per_condition {
            return Err(Error::InvalidConfig(format!(
                "split counts sum to {} but images_per_condition is {}",
                self.split_counts.total(),
                self.images_per_condition
            )));
        }
        Ok(())
    }

    pub fn condition(&self) -> String {
        condition_name(&self.spec)
    }

    pub fn corpus_dir(&self) -> PathBuf {
        self.output_root.join(self.condition())
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.corpus_dir().join(MANIFEST_FILE)
    }
}

/// Relative image path inside a corpus directory.
pub fn image_relative_path(split: Split, bin: BinLabel, temperature: f64, replicate: u32) -> String {
    format!("{split}/{bin}/T{temperature:.2}_r{replicate}.png")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageRecord {
    /// Relative to the directory holding the manifest, `/`-separated.
    pub file_path: String,
    pub boundary_condition: String,
    pub temperature: f64,
    pub bin: BinLabel,
    pub split: Split,
    pub seed: u64,
    pub replicate: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub generator: String,
    pub condition: String,
    pub label_order: Vec<BinLabel>,
    pub config: DatasetConfig,
    pub records: Vec<ImageRecord>,
}

impl DatasetManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, self.to_json()).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }

    /// Loads a manifest; `config.output_root` is set to the corpus root
    /// (the parent of the manifest's directory).
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut manifest: DatasetManifest = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        manifest.config.output_root = path
            .parent()
            .and_then(Path::parent)
            .map(Path::to_path_buf)
            .unwrap_or_default();
        Ok(manifest)
    }

    pub fn count(&self, bin: BinLabel, split: Split) -> usize {
        self.records.iter().filter(|r| r.bin == bin && r.split == split).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_names_and_codes_are_distinct() {
        let specs: Vec<LatticeSpec> = DEFAULT_CONDITIONS
            .iter()
            .map(|&(bc, j)| LatticeSpec::new(4, 4, bc, j).unwrap())
            .collect();
        let names: Vec<String> = specs.iter().map(condition_name).collect();
        assert_eq!(names, ["periodic-ferro", "periodic-antiferro", "skewed-ferro", "antiperiodic-ferro"]);
        let mut codes: Vec<u64> = specs.iter().map(condition_code).collect();
        codes.dedup();
        assert_eq!(codes.len(), 4);
    }

    #[test]
    fn relative_path_layout() {
        assert_eq!(image_relative_path(Split::Validation, BinLabel::CR, 2.2, 3), "validation/CR/T2.20_r3.png");
    }

    #[test]
    fn config_validation() {
        let mut c = DatasetConfig::new(BoundaryCondition::Periodic, 1.0, "out").unwrap();
        c.validate().unwrap();
        c.images_per_condition = 1299;
        assert!(c.validate().is_err());
    }
}
