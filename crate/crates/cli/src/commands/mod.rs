pub mod exact;
pub mod generate;
pub mod simulate;
pub mod trace;
pub mod validate;

use std::fs;
use std::path::Path;

use ising_core::metropolis::{StartPolicy, DEFAULT_THERMALIZATION_SWEEPS};
use ising_core::{LatticeSpec, SimulationParams};
use crate::cli::{LatticeArgs, RunArgs};
use crate::config::{parse_boundary, parse_size, parse_start, pick, FileConfig};
use crate::error::{flag_error, CliError};

pub struct Context {
    pub file: FileConfig,
    pub verbose: u8,
}

impl Context {
    pub fn note(&self, msg: impl AsRef<str>) {
        if self.verbose > 0 {
            eprintln!("{}", msg.as_ref());
        }
    }
}

pub const DEFAULT_SIMULATION_SIZE: &str = "100x100";
pub const DEFAULT_SIMULATION_TEMPERATURE: f64 = 2.27;

/// Lattice spec from flags over the `[lattice]` section over defaults.
pub fn resolve_spec(ctx: &Context, args: &LatticeArgs, default_size: &str) -> Result<LatticeSpec, CliError> {
    let file = &ctx.file.lattice;
    let bc_flag = if args.bc.is_some() { "--bc" } else { "[lattice] boundary" };
    let boundary = match args.bc.as_deref().or(file.boundary.as_deref()) {
        Some(s) => parse_boundary(bc_flag, s)?,
        None => ising_core::BoundaryCondition::Periodic,
    };
    let size_flag = if args.size.is_some() { "--size" } else { "[lattice] size" };
    let size = args.size.as_deref().or(file.size.as_deref()).unwrap_or(default_size);
    let (rows, cols) = parse_size(size_flag, size)?;
    let coupling = pick(args.coupling, file.coupling, 1.0);
    let field = pick(args.field, file.field, 0.0);
    LatticeSpec::new(rows, cols, boundary, coupling)
        .map_err(flag_error("--coupling"))?
        .with_field(field)
        .map_err(flag_error("--field"))
}

pub fn resolve_params(ctx: &Context, args: &RunArgs) -> Result<SimulationParams, CliError> {
    let file = &ctx.file.simulation;
    let temperature = pick(args.temp, file.temperature, DEFAULT_SIMULATION_TEMPERATURE);
    let seed = pick(args.seed, file.seed, 0);
    let sweeps = pick(args.sweeps, file.sweeps, DEFAULT_THERMALIZATION_SWEEPS);
    let start = match args.start.as_deref().or(file.start.as_deref()) {
        Some(s) => parse_start("--start", s)?,
        None => StartPolicy::Auto,
    };
    let params = SimulationParams::new(temperature, seed).map_err(flag_error("--temp"))?;
    Ok(params.with_thermalization_sweeps(sweeps).with_start(start))
}

/// Everything a single run depends on, in the `--config` format so the
/// file can be fed straight back.
pub fn effective_run_toml(spec: &LatticeSpec, params: &SimulationParams) -> String {
    format!(
        "[lattice]\nboundary = \"{}\"\ncoupling = {:?}\nfield = {:?}\nsize = \"{}x{}\"\n\n\
         [simulation]\ntemperature = {:?}\nsweeps = {}\nseed = {}\nstart = \"{}\"\n",
        spec.boundary,
        spec.coupling,
        spec.field,
        spec.rows,
        spec.cols,
        params.temperature,
        params.thermalization_sweeps,
        params.seed,
        params.start.name(),
    )
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
