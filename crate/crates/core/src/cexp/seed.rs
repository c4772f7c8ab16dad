//! Seed derivation and the input stream for experiment trials.
//!
//! Both are SplitMix64. With `GAMMA = 0x9e3779b97f4a7c15` and the
//! finalizer
//!
//! ```text
//! fmix(z) = z ^= z >> 30; z *= 0xbf58476d1ce4e5b9;
//!           z ^= z >> 27; z *= 0x94d049bb133111eb;
//!           z ^ (z >> 31)                      (all arithmetic mod 2^64)
//! ```
//!
//! the trial seed is `mix64(base, n, r) = absorb(absorb(absorb(0, base), n), r)`
//! where `absorb(h, x) = fmix((h ^ x) + GAMMA)`. A stream seeded with `s`
//! yields `fmix(s + k·GAMMA)` for `k = 1, 2, ...`. Bounded draws in
//! `[0, range)` reject raw values below `2^64 mod range` and reduce the rest
//! modulo `range`.

pub const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
pub fn fmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn absorb(h: u64, x: u64) -> u64 {
    fmix((h ^ x).wrapping_add(GAMMA))
}

/// Seed for replication `rep` at design point `n`.
pub fn mix64(base: u64, n: u64, rep: u64) -> u64 {
    absorb(absorb(absorb(0, base), n), rep)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        fmix(self.state)
    }

    /// Uniform draw in `[0, range)`; `range` must be positive.
    pub fn below(&mut self, range: u64) -> u64 {
        assert!(range > 0);
        let threshold = range.wrapping_neg() % range;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % range;
            }
        }
    }

    /// Uniform random permutation of `1..=n` by Fisher–Yates.
    pub fn permutation(&mut self, n: usize) -> Vec<i64> {
        let mut v: Vec<i64> = (1..=n as i64).collect();
        for i in (1..n).rev() {
            let j = self.below(i as u64 + 1) as usize;
            v.swap(i, j);
        }
        v
    }

    /// Integer uniform on `[lo, hi]`.
    pub fn uniform_int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}
