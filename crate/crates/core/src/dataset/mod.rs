//! Labeled microstate image corpora.
//!
//! A corpus covers one boundary condition and coupling sign. Images live at
//! `{root}/{condition}/{split}/{bin}/T{temperature:.2}_r{replicate}.png`
//! next to `{root}/{condition}/manifest.json`, which echoes the generation
//! config and lists one record per image. Every record's seed regenerates
//! its image byte for byte.

pub mod bins;
pub mod generate;
pub mod manifest;
pub mod render;
pub mod validate;

pub use bins::{bin_label, BinEdges, BinLabel, Split, SplitCounts, SplitTriple, TemperatureGrid};
pub use generate::{generate_dataset, generate_dataset_with_jobs, plan_records, GenerationError, GenerationReport};
pub use manifest::{DatasetConfig, DatasetManifest, ImageRecord, DEFAULT_CONDITIONS, MANIFEST_FILE};
pub use render::{decode_png, encode_png, render_image};
pub use validate::{validate_manifest, ValidateOptions, ValidationIssue, ValidationReport};
