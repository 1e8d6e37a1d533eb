//! Seeded generator used by every instance generator.
//!
//! The algorithm is xoshiro256++ seeded through SplitMix64 from a single
//! `u64` (the `seed_from_u64` construction of the reference
//! implementation). Bounded integers take the high 64 bits of the 128-bit
//! product `x · n`; this has a bias below `n / 2^64`, which is irrelevant at
//! the sizes used here and keeps the mapping trivial to reproduce.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub struct Rng(Xoshiro256PlusPlus);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.below(len as u64) as usize
    }

    /// Forward Fisher-Yates: position `i` swaps with a uniform `j` in `i..len`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in 0..items.len() {
            let j = i + self.index(items.len() - i);
            items.swap(i, j);
        }
    }

    /// `count` distinct elements, in the order drawn.
    pub fn sample<T: Copy>(&mut self, items: &[T], count: usize) -> Vec<T> {
        let mut pool = items.to_vec();
        for i in 0..count {
            let j = i + self.index(pool.len() - i);
            pool.swap(i, j);
        }
        pool.truncate(count);
        pool
    }

    /// True with probability `permille / 1000`.
    pub fn chance(&mut self, permille: u32) -> bool {
        self.below(1000) < permille as u64
    }
}
