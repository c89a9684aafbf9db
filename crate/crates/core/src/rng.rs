//! Portable seeded randomness.
//!
//! All randomness in the crate flows through [`SeededRng`], which wraps the
//! ChaCha8 stream cipher generator (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`. The sampling primitives below are written out explicitly
//! so another implementation can reproduce the same draws:
//!
//! - `uniform_f64`: `(next_u64() >> 11) * 2^-53`, a double in `[0, 1)`.
//! - `below(n)`: the high 64 bits of the 128-bit product `next_u64() * n`.
//! - `sample_without_replacement(n, k)`: the first `k` positions of a partial
//!   Fisher–Yates shuffle of `0..n`, swapping position `i` with
//!   `i + below(n - i)`.
//!
//! Independent streams are derived from a master seed and a textual key with
//! [`derive_seed`] (64-bit FNV-1a of the key, xor the master seed).

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn uniform_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform double in `[lo, hi)`.
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform_f64()
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform_f64() < p
    }

    pub fn sample_without_replacement(&mut self, n: usize, k: usize) -> Vec<usize> {
        let k = k.min(n);
        let mut items: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below(n - i);
            items.swap(i, j);
        }
        items.truncate(k);
        items
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

pub fn derive_seed(master: u64, key: &str) -> u64 {
    master ^ fnv1a(key.as_bytes())
}
