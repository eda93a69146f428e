use std::fs;
use std::path::{Path, PathBuf};

use ising_core::agreement::{metropolis_agreement, AgreementReport, AgreementRun};
use ising_core::dataset::{validate_manifest, ValidateOptions, ValidationReport, MANIFEST_FILE};
use ising_core::{BoundaryCondition, Error, LatticeSpec};
use serde::Serialize;

use crate::cli::ValidateArgs;
use crate::commands::{write_file, Context};
use crate::error::CliError;

pub const ORACLE_TEMPERATURE: f64 = 2.5;

#[derive(Serialize)]
struct ManifestFailure {
    manifest: PathBuf,
    error: String,
}

#[derive(Serialize)]
struct Report {
    passed: bool,
    corpora: Vec<ValidationReport>,
    unreadable: Vec<ManifestFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<AgreementReport>,
}

/// A manifest file, a corpus directory, or a root whose subdirectories are
/// corpora.
fn find_manifests(path: &Path) -> Result<Vec<PathBuf>, CliError> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    if path.join(MANIFEST_FILE).is_file() {
        return Ok(vec![path.join(MANIFEST_FILE)]);
    }
    let mut found = Vec::new();
    if path.is_dir() {
        let entries = fs::read_dir(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        for entry in entries.flatten() {
            let candidate = entry.path().join(MANIFEST_FILE);
            if candidate.is_file() {
                found.push(candidate);
            }
        }
        found.sort();
    }
    if found.is_empty() {
        return Err(CliError::Usage(format!("no {MANIFEST_FILE} at {}", path.display())));
    }
    Ok(found)
}

pub fn run(ctx: &Context, args: ValidateArgs) -> Result<(), CliError> {
    let manifests = find_manifests(&args.manifest)?;
    let options = ValidateOptions {
        regenerate: args.regenerate,
        require_default_counts: args.require_default_counts,
    };
    let mut report = Report {
        passed: true,
        corpora: Vec::new(),
        unreadable: Vec::new(),
        oracle: None,
    };
    for path in manifests {
        ctx.note(format!("validating {}", path.display()));
        match validate_manifest(&path, &options) {
            Ok(r) => report.corpora.push(r),
            Err(e @ (Error::Json { .. } | Error::Io { .. })) => report.unreadable.push(ManifestFailure {
                manifest: path,
                error: e.to_string(),
            }),
            Err(e) => return Err(e.into()),
        }
    }
    if args.oracle {
        ctx.note("running the 4x4 Metropolis-vs-enumeration check");
        let spec = LatticeSpec::new(4, 4, BoundaryCondition::Periodic, 1.0)?;
        report.oracle = Some(metropolis_agreement(&spec, ORACLE_TEMPERATURE, &AgreementRun::default())?);
    }
    report.passed = report.unreadable.is_empty()
        && report.corpora.iter().all(ValidationReport::passed)
        && report.oracle.as_ref().is_none_or(|o| o.passed);

    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match &args.report {
        Some(path) => write_file(path, json)?,
        None => print!("{json}"),
    }
    if report.passed {
        Ok(())
    } else {
        let failing = report.corpora.iter().filter(|r| !r.passed()).count() + report.unreadable.len();
        let oracle_failed = report.oracle.as_ref().is_some_and(|o| !o.passed);
        Err(CliError::Validation(format!(
            "validation failed: {failing} corpus problem(s){}",
            if oracle_failed { ", oracle disagreement" } else { "" }
        )))
    }
}
