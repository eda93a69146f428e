use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::dataset::bins::{BinLabel, Split, TemperatureGrid};
use crate::dataset::manifest::{image_relative_path, image_seed, DatasetConfig, DatasetManifest, ImageRecord, GENERATOR};
use crate::dataset::render::encode_png;
use crate::error::{Error, Result};
use crate::metropolis::{sample_microstate_with, SimulationParams};

/// Assigns every (bin, split) slot a grid temperature and replicate index.
///
/// Within a bin the slots walk the bin's grid points at an even stride, so
/// each temperature is used `⌊total/n⌋` or `⌈total/n⌉` times and the
/// temperatures are distinct whenever the bin has at least as many grid
/// points as images. Slots are dealt to splits by largest remaining quota,
/// which spreads every split across the whole bin. Records come back ordered
/// by split, bin, temperature and replicate.
pub fn plan_records(config: &DatasetConfig) -> Result<Vec<ImageRecord>> {
    config.validate()?;
    let grid = TemperatureGrid::new(config.temperature_step)?;
    let condition = config.condition();
    let mut records = Vec::with_capacity(config.images_per_condition);
    for bin in BinLabel::ALL {
        let points = grid.indices_in(&config.bin_edges, bin);
        let quotas: Vec<usize> = Split::ALL.iter().map(|&s| config.split_counts.get(bin, s)).collect();
        let total: usize = quotas.iter().sum();
        if total == 0 {
            continue;
        }
        if points.is_empty() {
            return Err(Error::InvalidConfig(format!("bin {bin} contains no grid temperatures")));
        }
        if !config.allow_replicates && total > points.len() {
            return Err(Error::InvalidConfig(format!(
                "bin {bin} needs {total} images but has only {} grid temperatures and replicates are disabled",
                points.len()
            )));
        }
        let mut replicas = vec![0u32; points.len()];
        let mut dealt = [0usize; 3];
        for j in 0..total {
            let slot = j * points.len() / total;
            let k = points[slot];
            let replicate = replicas[slot];
            replicas[slot] += 1;
            // largest deficit quota*(j+1)/total - dealt, ties to the earlier split
            let s = (0..3)
                .max_by_key(|&s| {
                    let deficit = (quotas[s] * (j + 1)) as i64 - (dealt[s] * total) as i64;
                    (deficit, std::cmp::Reverse(s))
                })
                .expect("three splits");
            dealt[s] += 1;
            let split = Split::ALL[s];
            let temperature = grid.temperature(k);
            records.push(ImageRecord {
                file_path: image_relative_path(split, bin, temperature, replicate),
                boundary_condition: condition.clone(),
                temperature,
                bin,
                split,
                seed: image_seed(config.base_seed, &config.spec, k, replicate),
                replicate,
            });
        }
        debug_assert_eq!(dealt.to_vec(), quotas);
    }
    records.sort_by(|a, b| {
        (a.split, a.bin)
            .cmp(&(b.split, b.bin))
            .then(a.temperature.total_cmp(&b.temperature))
            .then(a.replicate.cmp(&b.replicate))
    });
    Ok(records)
}

pub fn build_manifest(config: &DatasetConfig) -> Result<DatasetManifest> {
    Ok(DatasetManifest {
        generator: GENERATOR.to_string(),
        condition: config.condition(),
        label_order: BinLabel::ALL.to_vec(),
        config: config.clone(),
        records: plan_records(config)?,
    })
}

/// PNG bytes of the microstate a record describes.
pub fn render_record(config: &DatasetConfig, record: &ImageRecord) -> Result<Vec<u8>> {
    let params = SimulationParams::new(record.temperature, record.seed)?
        .with_thermalization_sweeps(config.thermalization_sweeps)
        .with_start(config.start);
    let lattice = sample_microstate_with(&config.spec, &params)?;
    encode_png(&lattice)
}

fn write_record(config: &DatasetConfig, corpus: &Path, record: &ImageRecord) -> Result<bool> {
    let path = corpus.join(&record.file_path);
    if path.is_file() {
        return Ok(false);
    }
    let bytes = render_record(config, record)?;
    let dir = path.parent().expect("record paths have a directory");
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tmp = path.with_extension("png.tmp");
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
    Ok(true)
}

#[derive(Debug)]
pub struct GenerationReport {
    pub manifest: DatasetManifest,
    pub generated: usize,
    pub skipped: usize,
}

#[derive(Debug, thiserror::Error)]
#[error("generation stopped after {completed} of {total} images: {source}")]
pub struct GenerationError {
    pub completed: usize,
    pub total: usize,
    #[source]
    pub source: Error,
}

/// Renders every planned image that is not already on disk, then writes
/// the manifest. `jobs` bounds the worker threads (0 means rayon's default).
/// Output does not depend on `jobs`.
pub fn generate_dataset_with_jobs(
    config: &DatasetConfig,
    jobs: usize,
) -> std::result::Result<GenerationReport, GenerationError> {
    let manifest = build_manifest(config).map_err(|source| GenerationError {
        completed: 0,
        total: 0,
        source,
    })?;
    let total = manifest.records.len();
    let corpus = config.corpus_dir();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let outcomes: Vec<Result<bool>> = pool.install(|| {
        manifest
            .records
            .par_iter()
            .map(|r| write_record(config, &corpus, r))
            .collect()
    });
    let completed = outcomes.iter().filter(|o| o.is_ok()).count();
    let generated = outcomes.iter().filter(|o| matches!(o, Ok(true))).count();
    if let Some(err) = outcomes.into_iter().find_map(|o| o.err()) {
        return Err(GenerationError {
            completed,
            total,
            source: err,
        });
    }
    manifest
        .write(&config.manifest_path())
        .map_err(|source| GenerationError {
            completed,
            total,
            source,
        })?;
    Ok(GenerationReport {
        manifest,
        generated,
        skipped: total - generated,
    })
}

pub fn generate_dataset(config: &DatasetConfig) -> std::result::Result<DatasetManifest, GenerationError> {
    generate_dataset_with_jobs(config, 0).map(|r| r.manifest)
}
