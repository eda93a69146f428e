use std::path::PathBuf;

use ising_core::dataset::manifest::{condition_name, DEFAULT_TEMPERATURE_STEP};
use ising_core::dataset::{generate_dataset_with_jobs, BinLabel, DatasetConfig, DatasetManifest, Split, DEFAULT_CONDITIONS};
use ising_core::metropolis::{StartPolicy, DEFAULT_THERMALIZATION_SWEEPS};
use ising_core::LatticeSpec;

use crate::cli::GenerateArgs;
use crate::commands::Context;
use crate::config::{parse_size, parse_split_counts, parse_start, pick};
use crate::error::{flag_error, CliError};

/// Default conditions whose boundary name or corpus name matches a filter.
fn selected_conditions(filters: &[String]) -> Result<Vec<(ising_core::BoundaryCondition, f64)>, CliError> {
    if filters.is_empty() {
        return Ok(DEFAULT_CONDITIONS.to_vec());
    }
    let mut out = Vec::new();
    for f in filters {
        let wanted = f.trim().to_ascii_lowercase();
        let hits: Vec<_> = DEFAULT_CONDITIONS
            .into_iter()
            .filter(|&(bc, j)| {
                let spec = LatticeSpec::new(2, 2, bc, j).expect("default conditions are valid");
                bc.name() == wanted || wanted.parse().ok() == Some(bc) || condition_name(&spec) == wanted
            })
            .collect();
        if hits.is_empty() {
            return Err(CliError::Usage(format!(
                "--only-bc: {f:?} matches none of periodic-ferro, periodic-antiferro, skewed-ferro, antiperiodic-ferro"
            )));
        }
        for h in hits {
            if !out.contains(&h) {
                out.push(h);
            }
        }
    }
    Ok(out)
}

fn build_config(ctx: &Context, args: &GenerateArgs, bc: ising_core::BoundaryCondition, j: f64) -> Result<DatasetConfig, CliError> {
    let file = &ctx.file.dataset;
    let root = args.root.clone().or_else(|| file.root.clone()).unwrap_or_else(|| PathBuf::from("corpus"));
    let mut config = DatasetConfig::new(bc, j, root)?;
    if let Some(size) = args.size.as_deref().or(file.size.as_deref()) {
        let (rows, cols) = parse_size("--size", size)?;
        config.spec = LatticeSpec::new(rows, cols, bc, j).map_err(flag_error("--size"))?;
    }
    config.base_seed = pick(args.seed, file.seed, 0);
    config.thermalization_sweeps = pick(args.sweeps, file.sweeps, DEFAULT_THERMALIZATION_SWEEPS);
    config.temperature_step = pick(args.temp_step, file.temperature_step, DEFAULT_TEMPERATURE_STEP);
    config.start = match args.start.as_deref().or(file.start.as_deref()) {
        Some(s) => parse_start("--start", s)?,
        None => StartPolicy::Auto,
    };
    if let Some(allow) = file.allow_replicates {
        config.allow_replicates = allow;
    }
    if let Some(table) = &file.split_counts {
        config.split_counts = parse_split_counts(table)?;
        config.images_per_condition = config.split_counts.total();
    }
    config.validate()?;
    Ok(config)
}

fn print_counts(manifest: &DatasetManifest, generated: usize, skipped: usize) {
    println!("{} ({} images; generated {generated}, kept {skipped})", manifest.condition, manifest.records.len());
    println!("  {:<6} {:>6} {:>10} {:>6} {:>6}", "bin", "train", "validation", "test", "total");
    for bin in BinLabel::ALL {
        let n: Vec<usize> = Split::ALL.iter().map(|&s| manifest.count(bin, s)).collect();
        println!(
            "  {:<6} {:>6} {:>10} {:>6} {:>6}",
            bin.name(),
            n[0],
            n[1],
            n[2],
            n.iter().sum::<usize>()
        );
    }
}

pub fn run(ctx: &Context, args: GenerateArgs) -> Result<(), CliError> {
    let filters = if args.only_bc.is_empty() {
        ctx.file.dataset.only_bc.clone().unwrap_or_default()
    } else {
        args.only_bc.clone()
    };
    let conditions = selected_conditions(&filters)?;
    // resolve everything before writing anything
    let configs = conditions
        .into_iter()
        .map(|(bc, j)| build_config(ctx, &args, bc, j))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs = pick(args.jobs, ctx.file.dataset.jobs, 0);

    let mut total = 0;
    for (i, config) in configs.iter().enumerate() {
        ctx.note(format!("generating {} into {}", config.condition(), config.corpus_dir().display()));
        match generate_dataset_with_jobs(config, jobs) {
            Ok(report) => {
                total += report.manifest.records.len();
                print_counts(&report.manifest, report.generated, report.skipped);
            }
            Err(e) => {
                let done: Vec<String> = configs[..i].iter().map(DatasetConfig::condition).collect();
                eprintln!(
                    "partial progress: corpora complete [{}]; {}: {} of {} images on disk; re-run the same command to finish",
                    done.join(", "),
                    config.condition(),
                    e.completed,
                    e.total
                );
                return Err(CliError::Io(format!("{}: {e}", config.condition())));
            }
        }
    }
    println!("total {total} images in {} corpora", configs.len());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ising_core::BoundaryCondition;

    #[test]
    fn condition_filters() {
        assert_eq!(selected_conditions(&[]).unwrap().len(), 4);
        assert_eq!(
            selected_conditions(&["skewed".into()]).unwrap(),
            vec![(BoundaryCondition::SkewedPlusMinus, 1.0)]
        );
        assert_eq!(selected_conditions(&["periodic".into()]).unwrap().len(), 2);
        assert_eq!(
            selected_conditions(&["periodic-antiferro".into()]).unwrap(),
            vec![(BoundaryCondition::Periodic, -1.0)]
        );
        assert!(selected_conditions(&["open".into()]).is_err());
    }
}
