//! Spin lattices, boundary topologies and the nearest-neighbour Hamiltonian
//!
//! `H(σ) = -Σ_<a,b> J_ab σ_a σ_b - B Σ_i σ_i`
//!
//! Sites are indexed row-major, `site = r * cols + c`. Each physical bond is
//! listed once, as the right or down bond of its first site.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single Ising spin, either up (+1) or down (-1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Spin {
    Down = -1,
    Up = 1,
}

impl Spin {
    #[inline]
    pub fn value(self) -> i8 {
        self as i8
    }

    #[inline]
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    pub fn from_value(v: i64) -> Option<Spin> {
        match v {
            1 => Some(Spin::Up),
            -1 => Some(Spin::Down),
            _ => None,
        }
    }
}

/// Row-major grid of spins.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    rows: usize,
    cols: usize,
    spins: Vec<Spin>,
}

impl Lattice {
    pub fn uniform(rows: usize, cols: usize, spin: Spin) -> Self {
        Lattice {
            rows,
            cols,
            spins: vec![spin; rows * cols],
        }
    }

    /// Checkerboard with site (0, 0) up.
    pub fn checkerboard(rows: usize, cols: usize) -> Self {
        let spins = (0..rows * cols)
            .map(|s| {
                if (s / cols + s % cols).is_multiple_of(2) {
                    Spin::Up
                } else {
                    Spin::Down
                }
            })
            .collect();
        Lattice { rows, cols, spins }
    }

    pub fn from_spins(rows: usize, cols: usize, spins: Vec<Spin>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidSpec(format!(
                "lattice dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if spins.len() != rows * cols {
            return Err(Error::InvalidSpec(format!(
                "{} spins supplied for a {rows}x{cols} lattice",
                spins.len()
            )));
        }
        Ok(Lattice { rows, cols, spins })
    }

    /// Builds a lattice from the low `rows * cols` bits of `bits`; a set bit is spin up.
    pub fn from_bits(rows: usize, cols: usize, bits: u64) -> Self {
        let spins = (0..rows * cols)
            .map(|s| if bits >> s & 1 == 1 { Spin::Up } else { Spin::Down })
            .collect();
        Lattice { rows, cols, spins }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.spins.len()
    }

    #[inline]
    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    #[inline]
    pub fn get(&self, site: usize) -> Spin {
        self.spins[site]
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Spin {
        self.spins[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, site: usize, spin: Spin) {
        self.spins[site] = spin;
    }

    #[inline]
    pub fn flip(&mut self, site: usize) {
        self.spins[site] = self.spins[site].flipped();
    }

    pub fn flip_all(&mut self) {
        self.spins.iter_mut().for_each(|s| *s = s.flipped());
    }

    /// Flips every site with odd `r + c`, mapping ferromagnetic order onto
    /// the checkerboard and back.
    pub fn flip_odd_sublattice(&mut self) {
        let cols = self.cols;
        for (site, s) in self.spins.iter_mut().enumerate() {
            if (site / cols + site % cols) % 2 == 1 {
                *s = s.flipped();
            }
        }
    }

    pub fn spin_sum(&self) -> i64 {
        self.spins.iter().map(|s| s.value() as i64).sum()
    }

    /// Text snapshot: a `rows cols` header, then one line of `+1`/`-1` tokens per row.
    pub fn to_snapshot(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for row in self.spins.chunks(self.cols) {
            let line: Vec<&str> = row
                .iter()
                .map(|s| match s {
                    Spin::Up => "+1",
                    Spin::Down => "-1",
                })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_snapshot(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Snapshot("empty snapshot".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Snapshot(format!("bad header {header:?}: {e}")))?;
        let (rows, cols) = match dims[..] {
            [r, c] if r > 0 && c > 0 => (r, c),
            _ => return Err(Error::Snapshot(format!("bad header {header:?}"))),
        };
        let mut spins = Vec::with_capacity(rows * cols);
        for (r, line) in lines.enumerate() {
            if r >= rows {
                return Err(Error::Snapshot(format!("more than {rows} spin rows")));
            }
            let before = spins.len();
            for tok in line.split_whitespace() {
                let spin = match tok {
                    "+1" | "1" => Spin::Up,
                    "-1" => Spin::Down,
                    other => {
                        return Err(Error::Snapshot(format!(
                            "row {r}: invalid spin token {other:?}"
                        )))
                    }
                };
                spins.push(spin);
            }
            if spins.len() - before != cols {
                return Err(Error::Snapshot(format!(
                    "row {r} has {} spins, expected {cols}",
                    spins.len() - before
                )));
            }
        }
        if spins.len() != rows * cols {
            return Err(Error::Snapshot(format!(
                "expected {rows} spin rows, found {}",
                spins.len() / cols
            )));
        }
        Ok(Lattice { rows, cols, spins })
    }

    pub fn read_snapshot(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_snapshot(&text)
    }

    pub fn write_snapshot(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_snapshot()).map_err(|e| Error::io(path, e))
    }
}

/// Lattice edge topology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// Torus: both directions wrap with coupling `J`.
    Periodic,
    /// Torus whose wrap bonds, in both directions, carry `-J`.
    AntiPeriodic,
    /// Horizontal wrap with coupling `J`; the top and bottom rows are free edges.
    #[serde(rename = "skewed")]
    SkewedPlusMinus,
}

impl BoundaryCondition {
    pub const ALL: [BoundaryCondition; 3] = [
        BoundaryCondition::Periodic,
        BoundaryCondition::AntiPeriodic,
        BoundaryCondition::SkewedPlusMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::AntiPeriodic => "antiperiodic",
            BoundaryCondition::SkewedPlusMinus => "skewed",
        }
    }

    #[inline]
    fn wrap_sign(self) -> i8 {
        match self {
            BoundaryCondition::AntiPeriodic => -1,
            _ => 1,
        }
    }

    #[inline]
    fn vertical_wrap(self) -> bool {
        !matches!(self, BoundaryCondition::SkewedPlusMinus)
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "periodic" | "pbc" => Ok(BoundaryCondition::Periodic),
            "antiperiodic" | "apbc" => Ok(BoundaryCondition::AntiPeriodic),
            "skewed" | "skewedplusminus" | "skewedpm" => Ok(BoundaryCondition::SkewedPlusMinus),
            _ => Err(Error::InvalidSpec(format!("unknown boundary condition {s:?}"))),
        }
    }
}

/// Geometry plus Hamiltonian parameters: coupling `J` and field `B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub rows: usize,
    pub cols: usize,
    pub boundary: BoundaryCondition,
    pub coupling: f64,
    pub field: f64,
}

/// A neighbour of a site together with the sign its bond applies to `J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Neighbor {
    pub site: usize,
    pub sign: i8,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bond {
    pub site_a: usize,
    pub site_b: usize,
    pub effective_coupling: f64,
}

impl LatticeSpec {
    pub fn new(rows: usize, cols: usize, boundary: BoundaryCondition, coupling: f64) -> Result<Self> {
        let spec = LatticeSpec {
            rows,
            cols,
            boundary,
            coupling,
            field: 0.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_field(mut self, field: f64) -> Result<Self> {
        self.field = field;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows < 2 || self.cols < 2 {
            return Err(Error::InvalidSpec(format!(
                "lattice must be at least 2x2, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.rows.checked_mul(self.cols).is_none_or(|n| n > u32::MAX as usize) {
            return Err(Error::InvalidSpec("lattice too large".into()));
        }
        if self.coupling == 0.0 || !self.coupling.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "coupling must be finite and non-zero, got {}",
                self.coupling
            )));
        }
        if !self.field.is_finite() {
            return Err(Error::InvalidSpec(format!("field must be finite, got {}", self.field)));
        }
        Ok(())
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.rows * self.cols
    }

    pub fn check_lattice(&self, lattice: &Lattice) -> Result<()> {
        if lattice.rows() != self.rows || lattice.cols() != self.cols {
            return Err(Error::DimensionMismatch {
                lattice_rows: lattice.rows(),
                lattice_cols: lattice.cols(),
                spec_rows: self.rows,
                spec_cols: self.cols,
            });
        }
        Ok(())
    }

    #[inline]
    fn right(&self, site: usize) -> Neighbor {
        let (r, c) = (site / self.cols, site % self.cols);
        if c + 1 < self.cols {
            Neighbor { site: site + 1, sign: 1 }
        } else {
            Neighbor { site: r * self.cols, sign: self.boundary.wrap_sign() }
        }
    }

    #[inline]
    fn left(&self, site: usize) -> Neighbor {
        let c = site % self.cols;
        if c > 0 {
            Neighbor { site: site - 1, sign: 1 }
        } else {
            Neighbor { site: site + self.cols - 1, sign: self.boundary.wrap_sign() }
        }
    }

    #[inline]
    fn down(&self, site: usize) -> Option<Neighbor> {
        let r = site / self.cols;
        if r + 1 < self.rows {
            Some(Neighbor { site: site + self.cols, sign: 1 })
        } else if self.boundary.vertical_wrap() {
            Some(Neighbor { site: site % self.cols, sign: self.boundary.wrap_sign() })
        } else {
            None
        }
    }

    #[inline]
    fn up(&self, site: usize) -> Option<Neighbor> {
        let r = site / self.cols;
        if r > 0 {
            Some(Neighbor { site: site - self.cols, sign: 1 })
        } else if self.boundary.vertical_wrap() {
            Some(Neighbor { site: site + (self.rows - 1) * self.cols, sign: self.boundary.wrap_sign() })
        } else {
            None
        }
    }

    /// Every bond incident to `site`, one entry per bond. On 2-wide
    /// periodic directions the same neighbour appears twice (interior and
    /// wrap bond).
    pub fn neighbors(&self, site: usize) -> impl Iterator<Item = Neighbor> {
        [
            Some(self.right(site)),
            Some(self.left(site)),
            self.down(site),
            self.up(site),
        ]
        .into_iter()
        .flatten()
    }
}

/// Complete bond list of the spec's topology, each physical bond once.
pub fn bonds(spec: &LatticeSpec) -> Result<Vec<Bond>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(2 * spec.sites());
    for site in 0..spec.sites() {
        for n in std::iter::once(spec.right(site)).chain(spec.down(site)) {
            out.push(Bond {
                site_a: site,
                site_b: n.site,
                effective_coupling: n.sign as f64 * spec.coupling,
            });
        }
    }
    Ok(out)
}

/// Energy of `lattice` given a precomputed bond list.
pub fn energy_with_bonds(lattice: &Lattice, bonds: &[Bond], field: f64) -> f64 {
    let spins = lattice.spins();
    let interaction: f64 = bonds
        .iter()
        .map(|b| b.effective_coupling * (spins[b.site_a].value() * spins[b.site_b].value()) as f64)
        .sum();
    -interaction - field * lattice.spin_sum() as f64
}

pub fn total_energy(lattice: &Lattice, spec: &LatticeSpec) -> Result<f64> {
    spec.check_lattice(lattice)?;
    Ok(energy_with_bonds(lattice, &bonds(spec)?, spec.field))
}

/// `H(σ with site flipped) - H(σ)` from the bonds incident to `site` alone.
pub fn delta_energy(lattice: &Lattice, spec: &LatticeSpec, site: usize) -> Result<f64> {
    spec.check_lattice(lattice)?;
    if site >= lattice.sites() {
        return Err(Error::SiteOutOfRange {
            site,
            sites: lattice.sites(),
        });
    }
    let local: f64 = spec
        .neighbors(site)
        .map(|n| n.sign as f64 * spec.coupling * lattice.get(n.site).value() as f64)
        .sum();
    Ok(2.0 * lattice.get(site).value() as f64 * (local + spec.field))
}
