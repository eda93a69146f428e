//! Metropolis estimates checked against exact enumeration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{enumerate, ExactThermodynamics};
use crate::lattice::LatticeSpec;
use crate::metropolis::{hot_start, MetropolisChain};
use crate::rng::RngStream;

/// Sample mean with a batch-means standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    /// Signed distance from `reference` in standard errors.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.mean - reference) / self.std_error
    }
}

/// Splits `samples` into `batches` equal consecutive blocks (dropping the
/// remainder) and uses the spread of block means as the error estimate,
/// which absorbs autocorrelation shorter than a block.
pub fn batch_means(samples: &[f64], batches: usize) -> Result<Estimate> {
    if batches < 2 || samples.len() < batches {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 batches and one sample per batch, got {} samples in {batches} batches",
            samples.len()
        )));
    }
    let len = samples.len() / batches;
    let means: Vec<f64> = samples
        .chunks_exact(len)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / len as f64)
        .collect();
    let mean = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
    Ok(Estimate {
        mean,
        std_error: (var / batches as f64).sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AgreementRun {
    pub seed: u64,
    pub thermalization_sweeps: usize,
    pub measurement_sweeps: usize,
    pub batches: usize,
    pub tolerance_sigmas: f64,
}

impl Default for AgreementRun {
    fn default() -> Self {
        AgreementRun {
            seed: 2024,
            thermalization_sweeps: 1_000,
            measurement_sweeps: 200_000,
            batches: 100,
            tolerance_sigmas: 3.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AgreementReport {
    pub spec: LatticeSpec,
    pub temperature: f64,
    pub run: AgreementRun,
    pub exact_energy_per_site: f64,
    pub exact_abs_magnetization: f64,
    pub energy_per_site: Estimate,
    pub abs_magnetization: Estimate,
    pub passed: bool,
}

impl AgreementReport {
    pub fn energy_z(&self) -> f64 {
        self.energy_per_site.z_score(self.exact_energy_per_site)
    }

    pub fn abs_magnetization_z(&self) -> f64 {
        self.abs_magnetization.z_score(self.exact_abs_magnetization)
    }
}

/// Runs `chain` and compares `<E>/N` and `<|m|>` with `exact`.
pub fn compare_chain(
    mut chain: MetropolisChain,
    exact: &ExactThermodynamics,
    run: &AgreementRun,
    rng: &mut RngStream,
) -> Result<AgreementReport> {
    for _ in 0..run.thermalization_sweeps {
        chain.sweep(rng);
    }
    let mut energies = Vec::with_capacity(run.measurement_sweeps);
    let mut abs_m = Vec::with_capacity(run.measurement_sweeps);
    for _ in 0..run.measurement_sweeps {
        chain.sweep(rng);
        energies.push(chain.energy_per_site());
        abs_m.push(chain.magnetization_per_spin().abs());
    }
    let sites = chain.spec().sites() as f64;
    let energy_per_site = batch_means(&energies, run.batches)?;
    let abs_magnetization = batch_means(&abs_m, run.batches)?;
    let exact_energy_per_site = exact.mean_energy / sites;
    let passed = energy_per_site.z_score(exact_energy_per_site).abs() <= run.tolerance_sigmas
        && abs_magnetization.z_score(exact.mean_abs_magnetization).abs() <= run.tolerance_sigmas;
    Ok(AgreementReport {
        spec: *chain.spec(),
        temperature: exact.temperature,
        run: *run,
        exact_energy_per_site,
        exact_abs_magnetization: exact.mean_abs_magnetization,
        energy_per_site,
        abs_magnetization,
        passed,
    })
}

/// Hot-started standard Metropolis chain against exact enumeration.
pub fn metropolis_agreement(spec: &LatticeSpec, temperature: f64, run: &AgreementRun) -> Result<AgreementReport> {
    let exact = enumerate(spec, temperature)?;
    let mut rng = RngStream::new(run.seed);
    let lattice = hot_start(spec, &mut rng);
    let chain = MetropolisChain::new(*spec, temperature, lattice)?;
    compare_chain(chain, &exact, run, &mut rng)
}
