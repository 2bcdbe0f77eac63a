//! Deterministic random scalars for reproducible randomized checks.
//!
//! The generator is SplitMix64 (Steele–Lea–Flood's `splitmix64` finalizer on
//! a Weyl sequence): tiny, portable, and fully specified here so a seed means
//! the same instance on every platform and in every release.

use crate::field::{FieldSpec, Scalar};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, n)` by rejection, so small moduli carry no bias.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Uniform integer in the inclusive range `[lo, hi]`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.below((hi - lo) as u64 + 1) as i64
    }

    /// A random scalar: a uniform integer in `{-3, …, 3}` over the rationals,
    /// a uniform residue over a prime field. Small integer entries keep the
    /// exact arithmetic fast without sacrificing genericity of the samples.
    pub fn scalar(&mut self, field: FieldSpec) -> Scalar {
        match field {
            FieldSpec::Rationals => field.integer(self.int_in(-3, 3)),
            FieldSpec::PrimeField(p) => Scalar::Fp { value: self.below(p), modulus: p },
        }
    }

    /// A random scalar guaranteed nonzero.
    pub fn nonzero_scalar(&mut self, field: FieldSpec) -> Scalar {
        loop {
            let s = self.scalar(field);
            if !s.is_zero() {
                return s;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_stream() {
        // First outputs for seed 0, cross-checked against the published
        // splitmix64 reference implementation.
        let mut r = Rng::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn determinism_and_ranges() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        for _ in 0..200 {
            let v = a.int_in(-3, 3);
            assert!((-3..=3).contains(&v));
            assert!(a.below(7) < 7);
        }
        let f5 = FieldSpec::PrimeField(5);
        for _ in 0..50 {
            assert!(!a.nonzero_scalar(f5).is_zero());
        }
    }
}
