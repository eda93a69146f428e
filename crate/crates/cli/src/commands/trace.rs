use std::fmt::Write as _;
use std::fs;

use ising_core::metropolis::{initial_lattice, parse_trace_csv, thermalize, TracePoint};
use ising_core::RngStream;

use crate::cli::{SeriesFormat, TraceArgs};
use crate::commands::{resolve_params, resolve_spec, write_file, Context, DEFAULT_SIMULATION_SIZE};
use crate::error::CliError;
use crate::plot::plot_magnetization;

const COLUMNS: [&str; 3] = ["sweep", "magnetization_per_spin", "energy_per_site"];

pub fn format_series(trace: &[TracePoint], format: SeriesFormat) -> String {
    let sep = match format {
        SeriesFormat::Tsv => '\t',
        SeriesFormat::Csv => ',',
    };
    let mut out = COLUMNS.join(&sep.to_string());
    out.push('\n');
    for p in trace {
        let _ = writeln!(out, "{}{sep}{}{sep}{}", p.sweep, p.magnetization_per_spin, p.energy_per_site);
    }
    out
}

/// Reads either delimiter.
pub fn parse_series(text: &str) -> Result<Vec<TracePoint>, ising_core::Error> {
    parse_trace_csv(&text.replace('\t', ","))
}

pub fn run(ctx: &Context, args: TraceArgs) -> Result<(), CliError> {
    let trace = match &args.input {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            parse_series(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
        }
        None => {
            let spec = resolve_spec(ctx, &args.lattice, DEFAULT_SIMULATION_SIZE)?;
            let params = resolve_params(ctx, &args.run)?;
            ctx.note(format!("running {} sweeps at T={}", params.thermalization_sweeps, params.temperature));
            let mut rng = RngStream::new(params.seed);
            let lattice = initial_lattice(&spec, &params, &mut rng);
            thermalize(lattice, &spec, &params, &mut rng)?.trace
        }
    };
    let series = format_series(&trace, args.format);
    match &args.out {
        Some(path) => write_file(path, series)?,
        None => print!("{series}"),
    }
    if let Some(path) = &args.plot {
        let png = plot_magnetization(&trace)?;
        write_file(path, png)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_carry_identical_numbers() {
        let trace = vec![
            TracePoint { sweep: 1, magnetization_per_spin: 0.25, energy_per_site: -1.5 },
            TracePoint { sweep: 2, magnetization_per_spin: -0.125, energy_per_site: -1.75 },
        ];
        let tsv = format_series(&trace, SeriesFormat::Tsv);
        let csv = format_series(&trace, SeriesFormat::Csv);
        assert_eq!(tsv.replace('\t', ","), csv);
        assert_eq!(parse_series(&tsv).unwrap(), trace);
        assert_eq!(parse_series(&csv).unwrap(), trace);
        assert!(parse_series("").is_err());
    }
}
