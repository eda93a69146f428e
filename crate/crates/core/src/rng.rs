//! Deterministic random streams.
//!
//! Every stream is a Xoshiro256++ generator (`rand_xoshiro` 0.6) seeded
//! through `SeedableRng::seed_from_u64`, with site indices drawn by
//! `rand::distributions::Uniform<u32>`. All of these are fixed algorithms
//! over integers, so a seed names the same sequence on every platform.
//! Per-job seeds are derived from a base seed with a SplitMix64 chain.

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

#[derive(Clone, Debug)]
pub struct RngStream {
    inner: Xoshiro256PlusPlus,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// Uniform variate in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform index in `0..n`; same draws as [`RngStream::index_in`] with `IndexRange::new(n)`.
    #[inline]
    pub fn index(&mut self, n: u32) -> usize {
        self.index_in(&IndexRange::new(n))
    }

    #[inline]
    pub fn index_in(&mut self, range: &IndexRange) -> usize {
        range.0.sample(&mut self.inner) as usize
    }

    #[inline]
    pub fn coin(&mut self) -> bool {
        self.inner.next_u32() >> 31 == 1
    }
}

/// Precomputed uniform sampler over `0..n`.
#[derive(Clone, Copy, Debug)]
pub struct IndexRange(Uniform<u32>);

impl IndexRange {
    pub fn new(n: u32) -> Self {
        assert!(n > 0, "empty index range");
        IndexRange(Uniform::new(0, n))
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `parts` into `base`, order-sensitively.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RngStream::new(42);
        let mut b = RngStream::new(42);
        for _ in 0..1000 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
            assert_eq!(a.index(97), b.index(97));
        }
    }

    #[test]
    fn pinned_generator_output() {
        // frozen outputs; a change here means every published corpus seed changes meaning
        let mut s = RngStream::new(0);
        let first: Vec<usize> = (0..8).map(|_| s.index(1000)).collect();
        assert_eq!(first, [324, 382, 359, 11, 495, 20, 857, 845]);
        assert_eq!(s.uniform().to_bits(), 4598983807939961468);
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(derive_seed(7, &[1, 2, 3]), 2419173667198131970);
    }

    #[test]
    fn derived_seeds_differ() {
        let mut seen = std::collections::HashSet::new();
        for c in 0..4 {
            for t in 0..50 {
                for r in 0..5 {
                    assert!(seen.insert(derive_seed(7, &[c, t, r])));
                }
            }
        }
        assert_ne!(derive_seed(1, &[2, 3]), derive_seed(1, &[3, 2]));
    }

    #[test]
    fn index_in_range_and_uniform_in_unit_interval() {
        let mut s = RngStream::new(9);
        for _ in 0..10_000 {
            assert!(s.index(7) < 7);
            let u = s.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
