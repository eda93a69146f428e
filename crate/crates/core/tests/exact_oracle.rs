use ising_core::exact::{enumerate, parse_golden, parse_spec_id, CRITICAL_TEMPERATURE};
use ising_core::{BoundaryCondition, Lattice, LatticeSpec};
use proptest::prelude::*;

const GOLDEN: &str = include_str!("data/exact_golden.csv");

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn golden_values_match() {
    let rows = parse_golden(GOLDEN).unwrap();
    assert!(rows.len() >= 10);
    for row in rows {
        let spec = parse_spec_id(&row.spec_id).unwrap();
        let exact = enumerate(&spec, row.temperature).unwrap();
        let ctx = format!("{} T={}", row.spec_id, row.temperature);
        assert!(rel_close(exact.partition_function, row.partition_function, 1e-10), "Z {ctx}");
        assert!(rel_close(exact.mean_energy, row.mean_energy, 1e-10), "<E> {ctx}");
        assert!(rel_close(exact.mean_abs_magnetization, row.mean_abs_magnetization, 1e-10), "<|m|> {ctx}");
        assert!((exact.ln_partition_function - row.partition_function.ln()).abs() < 1e-9, "lnZ {ctx}");
    }
}

#[test]
fn mean_energy_is_minus_dlnz_dbeta() {
    let spec = LatticeSpec::new(4, 4, BoundaryCondition::Periodic, 1.0).unwrap();
    let t = 2.5;
    let h = 1e-5;
    let ln_z = |beta: f64| enumerate(&spec, 1.0 / beta).unwrap().ln_partition_function;
    let derivative = (ln_z(1.0 / t + h) - ln_z(1.0 / t - h)) / (2.0 * h);
    let mean_energy = enumerate(&spec, t).unwrap().mean_energy;
    assert!((-derivative - mean_energy).abs() < 1e-4, "{} vs {mean_energy}", -derivative);
}

#[test]
fn critical_temperature_sits_between_ordered_and_disordered_4x4() {
    let spec = LatticeSpec::new(4, 4, BoundaryCondition::Periodic, 1.0).unwrap();
    let at = |t| enumerate(&spec, t).unwrap().mean_abs_magnetization;
    assert!(at(1.5) > at(CRITICAL_TEMPERATURE));
    assert!(at(CRITICAL_TEMPERATURE) > at(4.0));
}

/// Plain double loop over states and nearest neighbours, no shared code
/// with the library beyond the spec type.
fn naive_moments(spec: &LatticeSpec, t: f64) -> (f64, f64) {
    let (rows, cols) = (spec.rows, spec.cols);
    let n = rows * cols;
    let mut energies = Vec::with_capacity(1 << n);
    let mut mags = Vec::with_capacity(1 << n);
    for bits in 0u64..(1 << n) {
        let s = |r: usize, c: usize| if bits >> (r * cols + c) & 1 == 1 { 1.0 } else { -1.0 };
        let mut e = 0.0;
        let mut m = 0.0;
        for r in 0..rows {
            for c in 0..cols {
                m += s(r, c);
                e -= spec.field * s(r, c);
                let right_j = if c + 1 < cols {
                    spec.coupling
                } else if spec.boundary == BoundaryCondition::AntiPeriodic {
                    -spec.coupling
                } else {
                    spec.coupling
                };
                e -= right_j * s(r, c) * s(r, (c + 1) % cols);
                let down_j = match (r + 1 < rows, spec.boundary) {
                    (true, _) => spec.coupling,
                    (false, BoundaryCondition::Periodic) => spec.coupling,
                    (false, BoundaryCondition::AntiPeriodic) => -spec.coupling,
                    (false, BoundaryCondition::SkewedPlusMinus) => 0.0,
                };
                e -= down_j * s(r, c) * s((r + 1) % rows, c);
            }
        }
        energies.push(e);
        mags.push(f64::abs(m) / n as f64);
    }
    let e0 = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = energies.iter().map(|e| (-(e - e0) / t).exp()).collect();
    let z: f64 = w.iter().sum();
    let mean_e = w.iter().zip(&energies).map(|(w, e)| w * e).sum::<f64>() / z;
    let mean_m = w.iter().zip(&mags).map(|(w, m)| w * m).sum::<f64>() / z;
    (mean_e, mean_m)
}

fn boundary() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![
        Just(BoundaryCondition::Periodic),
        Just(BoundaryCondition::AntiPeriodic),
        Just(BoundaryCondition::SkewedPlusMinus),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumerator_agrees_with_naive_sum(
        rows in 2usize..=3,
        cols in 2usize..=4,
        bc in boundary(),
        coupling in prop_oneof![-1.5f64..-0.25, 0.25f64..1.5],
        field in -0.5f64..0.5,
        t in 0.5f64..5.0,
    ) {
        let spec = LatticeSpec::new(rows, cols, bc, coupling).unwrap().with_field(field).unwrap();
        let exact = enumerate(&spec, t).unwrap();
        let (mean_e, mean_m) = naive_moments(&spec, t);
        prop_assert!(rel_close(exact.mean_energy, mean_e, 1e-10));
        prop_assert!(rel_close(exact.mean_abs_magnetization, mean_m, 1e-10));
    }
}

#[test]
fn ordered_states_are_the_ferromagnetic_ground_states() {
    let spec = LatticeSpec::new(4, 4, BoundaryCondition::Periodic, 1.0).unwrap();
    let up = Lattice::uniform(4, 4, ising_core::Spin::Up);
    let e = ising_core::lattice::total_energy(&up, &spec).unwrap();
    let (ground, degeneracy) = ising_core::exact::ground_states(&spec).unwrap();
    assert_eq!((e, ground, degeneracy), (-32.0, -32.0, 2));
}
