//! The generator stream behind every seeded construction.
//!
//! The raw stream is xoshiro256** seeded through SplitMix64, exactly as in
//! the reference implementation by Blackman and Vigna. Derived draws:
//!
//! * `below(n)`: the high 64 bits of `next_u64() * n` (128-bit product);
//! * `chance(p)`: `(next_u64() >> 11) * 2^-53 < p`;
//! * case `i` of a run with seed `s` uses the stream seeded with
//!   `s ^ (i + 1) * 0x9E3779B97F4A7C15` (wrapping multiply).
//!
//! Any implementation following these rules reproduces the same systems.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

const CASE_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug)]
pub struct Prng(Xoshiro256StarStar);

impl Prng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256StarStar::seed_from_u64(seed))
    }

    /// The stream for case `case` of a run seeded with `seed`.
    pub fn for_case(seed: u64, case: usize) -> Self {
        Self::new(seed ^ (case as u64).wrapping_add(1).wrapping_mul(CASE_MIX))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn chance(&mut self, p: f64) -> bool {
        ((self.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < p
    }
}
