use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::dataset::bins::{BinLabel, Split, SplitCounts, TemperatureGrid};
use crate::dataset::generate::render_record;
use crate::dataset::manifest::{image_relative_path, image_seed, DatasetManifest};
use crate::error::Result;

#[derive(Clone, Debug, Default)]
pub struct ValidateOptions {
    /// Re-simulate this many records (evenly spaced) and compare bytes.
    pub regenerate: usize,
    /// Also require the per-bin split counts to equal the default table.
    pub require_default_counts: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    MissingFile {
        file_path: String,
    },
    LabelMismatch {
        file_path: String,
        temperature: f64,
        recorded: String,
        expected: String,
    },
    CountMismatch {
        bin: BinLabel,
        split: Split,
        expected: usize,
        found: usize,
    },
    NonDefaultCounts {
        bin: BinLabel,
        split: Split,
        default: usize,
        configured: usize,
    },
    SeedMismatch {
        file_path: String,
        recorded: u64,
        expected: u64,
    },
    LayoutMismatch {
        file_path: String,
        expected: String,
    },
    RegenerationMismatch {
        file_path: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub manifest: PathBuf,
    pub condition: String,
    pub records: usize,
    pub checks: Vec<CheckOutcome>,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }

    fn record_check(&mut self, check: &'static str, issues: Vec<ValidationIssue>, detail: String) {
        self.checks.push(CheckOutcome {
            check,
            passed: issues.is_empty(),
            detail: if issues.is_empty() {
                detail
            } else {
                format!("{} problem(s); {detail}", issues.len())
            },
        });
        self.issues.extend(issues);
    }
}

/// Checks a corpus against its manifest. Only an unreadable or malformed
/// manifest is an `Err`; every content problem lands in the report.
pub fn validate_manifest(manifest_path: &Path, options: &ValidateOptions) -> Result<ValidationReport> {
    let manifest = DatasetManifest::read(manifest_path)?;
    let corpus = manifest_path.parent().unwrap_or(Path::new("."));
    let config = &manifest.config;
    let mut report = ValidationReport {
        manifest: manifest_path.to_path_buf(),
        condition: manifest.condition.clone(),
        records: manifest.records.len(),
        checks: Vec::new(),
        issues: Vec::new(),
    };

    let missing: Vec<ValidationIssue> = manifest
        .records
        .iter()
        .filter(|r| !corpus.join(&r.file_path).is_file())
        .map(|r| ValidationIssue::MissingFile {
            file_path: r.file_path.clone(),
        })
        .collect();
    report.record_check("files_exist", missing, format!("{} records", manifest.records.len()));

    let mut labels = Vec::new();
    for r in &manifest.records {
        let expected = config.bin_edges.label(r.temperature);
        if expected.as_ref().ok() != Some(&r.bin) {
            labels.push(ValidationIssue::LabelMismatch {
                file_path: r.file_path.clone(),
                temperature: r.temperature,
                recorded: r.bin.to_string(),
                expected: match expected {
                    Ok(b) => b.to_string(),
                    Err(e) => e.to_string(),
                },
            });
        }
    }
    report.record_check("labels_match_temperature", labels, "bin re-derived from temperature".into());

    let mut counts = Vec::new();
    for bin in BinLabel::ALL {
        for split in Split::ALL {
            let expected = config.split_counts.get(bin, split);
            let found = manifest.count(bin, split);
            if expected != found {
                counts.push(ValidationIssue::CountMismatch { bin, split, expected, found });
            }
        }
    }
    report.record_check("split_counts", counts, format!("{} images configured", config.images_per_condition));

    if options.require_default_counts {
        let defaults = SplitCounts::table_defaults();
        let mut deviations = Vec::new();
        for bin in BinLabel::ALL {
            for split in Split::ALL {
                let (default, configured) = (defaults.get(bin, split), config.split_counts.get(bin, split));
                if default != configured {
                    deviations.push(ValidationIssue::NonDefaultCounts { bin, split, default, configured });
                }
            }
        }
        report.record_check("default_split_counts", deviations, "compared with the default table".into());
    }

    let mut seeds = Vec::new();
    let mut layout = Vec::new();
    if let Ok(grid) = TemperatureGrid::new(config.temperature_step) {
        for r in &manifest.records {
            let expected_path = image_relative_path(r.split, r.bin, r.temperature, r.replicate);
            if r.file_path != expected_path {
                layout.push(ValidationIssue::LayoutMismatch {
                    file_path: r.file_path.clone(),
                    expected: expected_path,
                });
            }
            let expected = grid
                .index_of(r.temperature)
                .map(|k| image_seed(config.base_seed, &config.spec, k, r.replicate));
            if expected != Some(r.seed) {
                seeds.push(ValidationIssue::SeedMismatch {
                    file_path: r.file_path.clone(),
                    recorded: r.seed,
                    expected: expected.unwrap_or(0),
                });
            }
        }
    }
    report.record_check("layout", layout, "paths follow split/bin/T<temp>_r<replicate>.png".into());
    report.record_check("seeds", seeds, "seeds re-derived from base seed".into());

    if options.regenerate > 0 && !manifest.records.is_empty() {
        let n = manifest.records.len();
        let picks = options.regenerate.min(n);
        let mut regen = Vec::new();
        for i in 0..picks {
            let r = &manifest.records[i * n / picks];
            let path = corpus.join(&r.file_path);
            let Ok(on_disk) = fs::read(&path) else {
                continue; // already reported as missing
            };
            if render_record(config, r)? != on_disk {
                regen.push(ValidationIssue::RegenerationMismatch {
                    file_path: r.file_path.clone(),
                });
            }
        }
        report.record_check("regeneration", regen, format!("{picks} records re-simulated"));
    }

    Ok(report)
}
