//! Exact thermodynamics of tiny lattices by enumerating all `2^N` states.
//!
//! States are visited in Gray-code order, so consecutive states differ by
//! one spin, but every energy is re-evaluated in full from the bond list.
//! Boltzmann weights are accumulated relative to the lowest energy seen so
//! far and rescaled whenever that minimum drops, which keeps the sums finite
//! at low temperature.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{bonds, energy_with_bonds, BoundaryCondition, Lattice, LatticeSpec, Spin};

pub const MAX_ENUMERATION_SITES: usize = 24;

/// Onsager's critical temperature of the infinite square lattice,
/// `2 / ln(1 + √2)`, in units of `J / k_B`.
pub const CRITICAL_TEMPERATURE: f64 = 2.269_185_314_213_022;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactThermodynamics {
    pub temperature: f64,
    pub partition_function: f64,
    pub ln_partition_function: f64,
    pub mean_energy: f64,
    pub mean_abs_magnetization: f64,
    pub mean_magnetization_sq: f64,
}

fn guard(spec: &LatticeSpec) -> Result<()> {
    spec.validate()?;
    if spec.sites() > MAX_ENUMERATION_SITES {
        return Err(Error::TooLarge {
            sites: spec.sites(),
            limit: MAX_ENUMERATION_SITES,
        });
    }
    Ok(())
}

/// Calls `visit(energy, spin_sum)` once for every microstate.
fn for_each_state(spec: &LatticeSpec, mut visit: impl FnMut(f64, i64)) -> Result<()> {
    guard(spec)?;
    let bond_list = bonds(spec)?;
    let mut lattice = Lattice::uniform(spec.rows, spec.cols, Spin::Down);
    let states = 1u64 << spec.sites();
    visit(energy_with_bonds(&lattice, &bond_list, spec.field), lattice.spin_sum());
    for i in 1..states {
        lattice.flip(i.trailing_zeros() as usize);
        visit(energy_with_bonds(&lattice, &bond_list, spec.field), lattice.spin_sum());
    }
    Ok(())
}

pub fn enumerate(spec: &LatticeSpec, temperature: f64) -> Result<ExactThermodynamics> {
    guard(spec)?;
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::TemperatureOutOfRange(temperature));
    }
    let n = spec.sites() as f64;
    let mut shift = f64::INFINITY;
    let (mut z, mut e_acc, mut abs_m_acc, mut m2_acc) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for_each_state(spec, |energy, spin_sum| {
        if energy < shift {
            let rescale = if shift.is_finite() {
                (-(shift - energy) / temperature).exp()
            } else {
                0.0
            };
            z *= rescale;
            e_acc *= rescale;
            abs_m_acc *= rescale;
            m2_acc *= rescale;
            shift = energy;
        }
        let w = (-(energy - shift) / temperature).exp();
        let m = spin_sum as f64 / n;
        z += w;
        e_acc += w * energy;
        abs_m_acc += w * m.abs();
        m2_acc += w * m * m;
    })?;
    let ln_z = z.ln() - shift / temperature;
    Ok(ExactThermodynamics {
        temperature,
        partition_function: ln_z.exp(),
        ln_partition_function: ln_z,
        mean_energy: e_acc / z,
        mean_abs_magnetization: abs_m_acc / z,
        mean_magnetization_sq: m2_acc / z,
    })
}

const LEVEL_RESOLUTION: f64 = 1e-9;

/// Distinct energies with their state counts, ascending.
pub fn energy_levels(spec: &LatticeSpec) -> Result<Vec<(f64, u64)>> {
    let mut levels: BTreeMap<i64, u64> = BTreeMap::new();
    for_each_state(spec, |energy, _| {
        *levels.entry((energy / LEVEL_RESOLUTION).round() as i64).or_default() += 1;
    })?;
    Ok(levels
        .into_iter()
        .map(|(k, count)| (k as f64 * LEVEL_RESOLUTION, count))
        .collect())
}

/// Minimum energy and the number of states attaining it.
pub fn ground_states(spec: &LatticeSpec) -> Result<(f64, u64)> {
    let levels = energy_levels(spec)?;
    Ok(levels[0])
}

/// Identifier used in golden-value files, e.g. `4x4-periodic-J1-B0`.
pub fn spec_id(spec: &LatticeSpec) -> String {
    format!(
        "{}x{}-{}-J{}-B{}",
        spec.rows, spec.cols, spec.boundary, spec.coupling, spec.field
    )
}

pub fn parse_spec_id(id: &str) -> Result<LatticeSpec> {
    let bad = || Error::InvalidSpec(format!("malformed spec id {id:?}"));
    let parts: Vec<&str> = id.split('-').collect();
    // coupling or field may themselves be negative, which splits them further
    let (dims, bc, rest) = match parts.as_slice() {
        [dims, bc, rest @ ..] if !rest.is_empty() => (*dims, *bc, rest.join("-")),
        _ => return Err(bad()),
    };
    let (rows, cols) = dims.split_once('x').ok_or_else(bad)?;
    let rest = rest.strip_prefix('J').ok_or_else(bad)?;
    let b_at = rest.rfind("-B").ok_or_else(bad)?;
    let coupling: f64 = rest[..b_at].parse().map_err(|_| bad())?;
    let field: f64 = rest[b_at + 2..].parse().map_err(|_| bad())?;
    let boundary: BoundaryCondition = bc.parse()?;
    LatticeSpec::new(
        rows.parse().map_err(|_| bad())?,
        cols.parse().map_err(|_| bad())?,
        boundary,
        coupling,
    )?
    .with_field(field)
}

pub const GOLDEN_HEADER: &str = "spec_id,temperature,Z,mean_energy,mean_abs_m";

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenRow {
    pub spec_id: String,
    pub temperature: f64,
    pub partition_function: f64,
    pub mean_energy: f64,
    pub mean_abs_magnetization: f64,
}

impl GoldenRow {
    pub fn from_exact(spec: &LatticeSpec, exact: &ExactThermodynamics) -> Self {
        GoldenRow {
            spec_id: spec_id(spec),
            temperature: exact.temperature,
            partition_function: exact.partition_function,
            mean_energy: exact.mean_energy,
            mean_abs_magnetization: exact.mean_abs_magnetization,
        }
    }
}

/// Golden rows as delimited text; floats use the shortest round-trip form.
pub fn format_golden(rows: &[GoldenRow]) -> String {
    let mut out = format!("{GOLDEN_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:e},{:e},{:e}",
            r.spec_id, r.temperature, r.partition_function, r.mean_energy, r.mean_abs_magnetization
        );
    }
    out
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenRow>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    if lines.next() != Some(GOLDEN_HEADER) {
        return Err(Error::Parse("golden file: missing header".into()));
    }
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let bad = || Error::Parse(format!("golden row {line:?}"));
            if f.len() != 5 {
                return Err(bad());
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
            Ok(GoldenRow {
                spec_id: f[0].to_string(),
                temperature: num(f[1])?,
                partition_function: num(f[2])?,
                mean_energy: num(f[3])?,
                mean_abs_magnetization: num(f[4])?,
            })
        })
        .collect()
}
