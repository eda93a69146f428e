use std::path::PathBuf;

use ising_core::metropolis::{initial_lattice, thermalize};
use ising_core::RngStream;

use crate::cli::SimulateArgs;
use crate::commands::{effective_run_toml, resolve_params, resolve_spec, write_file, Context, DEFAULT_SIMULATION_SIZE};
use crate::error::CliError;

pub const TRACE_FILE: &str = "trace.csv";
pub const SNAPSHOT_FILE: &str = "final.lattice";
pub const EFFECTIVE_CONFIG_FILE: &str = "effective_config.toml";

pub fn run(ctx: &Context, args: SimulateArgs) -> Result<(), CliError> {
    let spec = resolve_spec(ctx, &args.lattice, DEFAULT_SIMULATION_SIZE)?;
    let params = resolve_params(ctx, &args.run)?;
    let out = args.out.unwrap_or_else(|| PathBuf::from("."));
    ctx.note(format!(
        "simulating {}x{} {} J={} at T={} for {} sweeps (seed {})",
        spec.rows, spec.cols, spec.boundary, spec.coupling, params.temperature, params.thermalization_sweeps, params.seed
    ));

    let mut rng = RngStream::new(params.seed);
    let lattice = initial_lattice(&spec, &params, &mut rng);
    let record = thermalize(lattice, &spec, &params, &mut rng)?;

    write_file(&out.join(EFFECTIVE_CONFIG_FILE), effective_run_toml(&spec, &params))?;
    write_file(&out.join(TRACE_FILE), record.trace_csv())?;
    write_file(&out.join(SNAPSHOT_FILE), record.final_lattice.to_snapshot())?;
    if let Some(last) = record.trace.last() {
        println!(
            "sweeps={} magnetization_per_spin={} energy_per_site={}",
            last.sweep, last.magnetization_per_spin, last.energy_per_site
        );
    }
    println!("wrote {}", out.display());
    Ok(())
}
