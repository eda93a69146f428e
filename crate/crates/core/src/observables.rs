//! Scalar diagnostics of a microstate.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{total_energy, Lattice, LatticeSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableSet {
    pub magnetization_per_spin: f64,
    pub energy_per_site: f64,
    pub staggered_magnetization: f64,
}

impl ObservableSet {
    pub fn measure(lattice: &Lattice, spec: &LatticeSpec) -> Result<Self> {
        Ok(ObservableSet {
            magnetization_per_spin: magnetization_per_spin(lattice),
            energy_per_site: energy_per_site(lattice, spec)?,
            staggered_magnetization: staggered_magnetization(lattice),
        })
    }
}

pub fn magnetization_per_spin(lattice: &Lattice) -> f64 {
    lattice.spin_sum() as f64 / lattice.sites() as f64
}

pub fn energy_per_site(lattice: &Lattice, spec: &LatticeSpec) -> Result<f64> {
    Ok(total_energy(lattice, spec)? / lattice.sites() as f64)
}

/// Sublattice-signed mean spin, `(1/N) Σ (-1)^(r+c) σ_rc`, with site (0, 0) counted positive.
pub fn staggered_magnetization(lattice: &Lattice) -> f64 {
    let cols = lattice.cols();
    let sum: i64 = lattice
        .spins()
        .iter()
        .enumerate()
        .map(|(site, s)| {
            let v = s.value() as i64;
            if (site / cols + site % cols).is_multiple_of(2) {
                v
            } else {
                -v
            }
        })
        .sum();
    sum as f64 / lattice.sites() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{BoundaryCondition, Spin};

    #[test]
    fn magnetization_examples() {
        assert_eq!(magnetization_per_spin(&Lattice::uniform(4, 4, Spin::Up)), 1.0);
        assert_eq!(magnetization_per_spin(&Lattice::checkerboard(4, 4)), 0.0);
        let mut l = Lattice::uniform(4, 4, Spin::Up);
        for site in [0, 3, 6, 9, 12, 15] {
            l.flip(site);
        }
        assert_eq!(magnetization_per_spin(&l), 0.25);
    }

    #[test]
    fn energy_per_site_examples() {
        let ferro = LatticeSpec::new(4, 4, BoundaryCondition::Periodic, 1.0).unwrap();
        let afm = LatticeSpec::new(4, 4, BoundaryCondition::Periodic, -1.0).unwrap();
        assert_eq!(energy_per_site(&Lattice::uniform(4, 4, Spin::Up), &ferro).unwrap(), -2.0);
        assert_eq!(energy_per_site(&Lattice::checkerboard(4, 4), &afm).unwrap(), -2.0);
    }

    #[test]
    fn staggered_examples() {
        assert_eq!(staggered_magnetization(&Lattice::checkerboard(4, 6)), 1.0);
        assert_eq!(staggered_magnetization(&Lattice::uniform(4, 6, Spin::Up)), 0.0);
        let mut l = Lattice::checkerboard(4, 4);
        l.flip_all();
        assert_eq!(staggered_magnetization(&l), -1.0);
    }

    #[test]
    fn measure_bundles_all_three() {
        let spec = LatticeSpec::new(4, 4, BoundaryCondition::Periodic, 1.0).unwrap();
        let obs = ObservableSet::measure(&Lattice::uniform(4, 4, Spin::Down), &spec).unwrap();
        assert_eq!(obs.magnetization_per_spin, -1.0);
        assert_eq!(obs.energy_per_site, -2.0);
        assert_eq!(obs.staggered_magnetization, 0.0);
    }
}
