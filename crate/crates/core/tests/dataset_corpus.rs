use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use ising_core::dataset::{
    decode_png, encode_png, generate_dataset_with_jobs, validate_manifest, BinLabel, DatasetConfig, DatasetManifest,
    Split, SplitCounts, ValidateOptions, ValidationIssue,
};
use ising_core::{BoundaryCondition, Lattice, Spin};
use proptest::prelude::*;

fn small_config(root: &Path, bc: BoundaryCondition, j: f64) -> DatasetConfig {
    let mut config = DatasetConfig::new(bc, j, root).unwrap();
    config.spec = ising_core::LatticeSpec::new(8, 8, bc, j).unwrap();
    config.thermalization_sweeps = 10;
    config
}

/// Every file under `dir`, keyed by relative path.
fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    out
}

#[test]
fn fresh_corpus_validates_with_default_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let config = small_config(tmp.path(), BoundaryCondition::Periodic, -1.0);
    let report = generate_dataset_with_jobs(&config, 2).unwrap();
    assert_eq!(report.generated, 1300);
    let manifest = DatasetManifest::read(&config.manifest_path()).unwrap();
    assert_eq!(manifest.condition, "periodic-antiferro");
    assert_eq!(manifest.records.len(), 1300);
    let expected = SplitCounts::table_defaults();
    for bin in BinLabel::ALL {
        for split in Split::ALL {
            assert_eq!(manifest.count(bin, split), expected.get(bin, split));
        }
    }
    let options = ValidateOptions {
        regenerate: 25,
        require_default_counts: true,
    };
    let validation = validate_manifest(&config.manifest_path(), &options).unwrap();
    assert!(validation.passed(), "{:?}", validation.issues);
    assert!(validation.checks.iter().any(|c| c.check == "regeneration" && c.passed));
}

#[test]
fn deleted_images_are_reported_then_restored_bit_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let config = small_config(tmp.path(), BoundaryCondition::SkewedPlusMinus, 1.0);
    generate_dataset_with_jobs(&config, 0).unwrap();
    let before = snapshot(&config.corpus_dir());
    let manifest = DatasetManifest::read(&config.manifest_path()).unwrap();
    let victims: Vec<&str> = [3usize, 700, 1299].iter().map(|&i| manifest.records[i].file_path.as_str()).collect();
    for v in &victims {
        fs::remove_file(config.corpus_dir().join(v)).unwrap();
    }

    let report = validate_manifest(&config.manifest_path(), &ValidateOptions::default()).unwrap();
    let missing: Vec<&ValidationIssue> = report
        .issues
        .iter()
        .filter(|i| matches!(i, ValidationIssue::MissingFile { .. }))
        .collect();
    assert_eq!(missing.len(), 3);
    assert_eq!(report.issues.len(), 3);

    let rerun = generate_dataset_with_jobs(&config, 0).unwrap();
    assert_eq!((rerun.generated, rerun.skipped), (3, 1297));
    assert_eq!(snapshot(&config.corpus_dir()), before);
}

#[test]
fn edited_temperature_is_a_label_mismatch() {
    let tmp = tempfile::tempdir().unwrap();
    let config = small_config(tmp.path(), BoundaryCondition::AntiPeriodic, 1.0);
    generate_dataset_with_jobs(&config, 0).unwrap();
    let path = config.manifest_path();
    let mut manifest = DatasetManifest::read(&path).unwrap();
    let i = manifest.records.iter().position(|r| r.bin == BinLabel::FSbCR).unwrap();
    manifest.records[i].temperature = 3.5;
    fs::write(&path, manifest.to_json()).unwrap();

    let report = validate_manifest(&path, &ValidateOptions::default()).unwrap();
    assert!(!report.passed());
    assert!(report.issues.iter().any(|issue| matches!(
        issue,
        ValidationIssue::LabelMismatch { recorded, expected, .. } if recorded == "FSbCR" && expected == "SpCR"
    )));
    assert!(report.checks.iter().any(|c| c.check == "labels_match_temperature" && !c.passed));
}

#[test]
fn tampered_image_fails_regeneration() {
    let tmp = tempfile::tempdir().unwrap();
    let config = small_config(tmp.path(), BoundaryCondition::Periodic, 1.0);
    let manifest = generate_dataset_with_jobs(&config, 0).unwrap().manifest;
    let record = &manifest.records[0];
    let path = config.corpus_dir().join(&record.file_path);
    let mut lattice = ising_core::dataset::render::read_lattice_png(&path).unwrap();
    lattice.flip(0);
    fs::write(&path, encode_png(&lattice).unwrap()).unwrap();

    let options = ValidateOptions {
        regenerate: manifest.records.len(),
        require_default_counts: false,
    };
    let report = validate_manifest(&config.manifest_path(), &options).unwrap();
    assert_eq!(
        report.issues,
        vec![ValidationIssue::RegenerationMismatch {
            file_path: record.file_path.clone()
        }]
    );
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ca = small_config(a.path(), BoundaryCondition::Periodic, 1.0);
    let cb = small_config(b.path(), BoundaryCondition::Periodic, 1.0);
    generate_dataset_with_jobs(&ca, 1).unwrap();
    generate_dataset_with_jobs(&cb, 4).unwrap();
    assert_eq!(snapshot(&ca.corpus_dir()), snapshot(&cb.corpus_dir()));
}

#[test]
fn manifest_round_trips_and_is_stable() {
    let tmp = tempfile::tempdir().unwrap();
    let config = small_config(tmp.path(), BoundaryCondition::Periodic, 1.0);
    let manifest = generate_dataset_with_jobs(&config, 0).unwrap().manifest;
    let text = fs::read_to_string(config.manifest_path()).unwrap();
    assert_eq!(text, manifest.to_json());
    let back = DatasetManifest::read(&config.manifest_path()).unwrap();
    assert_eq!(back.records, manifest.records);
    assert_eq!(back.config.output_root, tmp.path());
    // record keys in a fixed order
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let first = value["records"][0].as_object().unwrap();
    let keys: Vec<&str> = first.keys().map(String::as_str).collect();
    assert!(keys.contains(&"file_path") && keys.contains(&"seed") && keys.contains(&"bin"));
    assert_eq!(value["label_order"], serde_json::json!(["FSbCR", "SbCR", "CR", "SpCR"]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn png_round_trips_any_lattice(rows in 1usize..24, cols in 1usize..24, bits in proptest::collection::vec(any::<bool>(), 576)) {
        let spins = bits[..rows * cols].iter().map(|&u| if u { Spin::Up } else { Spin::Down }).collect();
        let lattice = Lattice::from_spins(rows, cols, spins).unwrap();
        let png = encode_png(&lattice).unwrap();
        prop_assert_eq!(decode_png(&png).unwrap(), lattice);
    }
}
