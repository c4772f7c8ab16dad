//! Linear congruential and shift-register generators, cycle measurement,
//! and the full-period (Hull–Dobell) condition checker.
//!
//! Parameter names follow the usual convention: `a` is the multiplier and
//! `b` the increment in `r' = (a·r + b) mod m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted; products are formed in 128-bit arithmetic.
pub const MAX_MODULUS: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LcgKind {
    /// `b = 0`
    Multiplicative,
    Mixed,
}

/// Parameters `(a, b, m, r0)` of a linear congruential generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLcgParams")]
pub struct LcgParams {
    a: u64,
    b: u64,
    m: u64,
    r0: u64,
}

#[derive(Deserialize)]
struct RawLcgParams {
    a: u64,
    b: u64,
    m: u64,
    r0: u64,
}

impl TryFrom<RawLcgParams> for LcgParams {
    type Error = Error;

    fn try_from(raw: RawLcgParams) -> Result<Self> {
        LcgParams::new(raw.a, raw.b, raw.m, raw.r0)
    }
}

impl LcgParams {
    pub fn new(a: u64, b: u64, m: u64, r0: u64) -> Result<Self> {
        if m == 0 || m > MAX_MODULUS {
            return Err(Error::InvalidParameter(format!(
                "modulus must be in [1, 2^63], got {m}"
            )));
        }
        for (name, v) in [("a", a), ("b", b), ("r0", r0)] {
            if v >= m {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be below the modulus {m}"
                )));
            }
        }
        Ok(Self { a, b, m, r0 })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn r0(&self) -> u64 {
        self.r0
    }

    /// Same generator started from a different seed.
    pub fn with_seed(&self, r0: u64) -> Result<Self> {
        Self::new(self.a, self.b, self.m, r0)
    }

    pub fn kind(&self) -> LcgKind {
        if self.b == 0 {
            LcgKind::Multiplicative
        } else {
            LcgKind::Mixed
        }
    }

    /// Iterator over `r1, r2, ...` (the seed itself is not yielded).
    pub fn iter(&self) -> Lcg {
        Lcg {
            params: *self,
            state: self.r0,
        }
    }
}

/// One step of the LCG map. `state` must already be reduced mod `m`.
#[inline]
pub fn lcg_next(state: u64, params: &LcgParams) -> u64 {
    debug_assert!(state < params.m);
    ((params.a as u128 * state as u128 + params.b as u128) % params.m as u128) as u64
}

#[derive(Debug, Clone)]
pub struct Lcg {
    params: LcgParams,
    state: u64,
}

impl Iterator for Lcg {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.state = lcg_next(self.state, &self.params);
        Some(self.state)
    }
}

/// The first `count` iterates `r1..r_count`.
pub fn generate(params: &LcgParams, count: usize) -> Result<Vec<u64>> {
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    Ok(params.iter().take(count).collect())
}

/// Maps residues to `r / m` in `[0, 1)`.
pub fn normalize(seq: &[u64], m: u64) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    seq.iter()
        .map(|&r| {
            if r >= m {
                Err(Error::Precondition(format!(
                    "value {r} is not below the modulus {m}"
                )))
            } else {
                Ok(r as f64 / m as f64)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub period: u64,
    pub tail: u64,
    pub full_period: bool,
}

/// Brent's cycle detection on the orbit of `x0` under `f`.
///
/// Returns `(period, tail)`. Memory use is constant; time is
/// `O(tail + period)` evaluations of `f`.
pub fn detect_cycle<T, F>(x0: T, f: F) -> (u64, u64)
where
    T: Copy + PartialEq,
    F: Fn(T) -> T,
{
    let mut power: u64 = 1;
    let mut lam: u64 = 1;
    let mut tortoise = x0;
    let mut hare = f(x0);
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = f(hare);
        lam += 1;
    }

    let mut tortoise = x0;
    let mut hare = x0;
    for _ in 0..lam {
        hare = f(hare);
    }
    let mut mu = 0;
    while tortoise != hare {
        tortoise = f(tortoise);
        hare = f(hare);
        mu += 1;
    }
    (lam, mu)
}

pub fn find_period(params: &LcgParams) -> PeriodReport {
    let (period, tail) = detect_cycle(params.r0, |s| lcg_next(s, params));
    PeriodReport {
        period,
        tail,
        full_period: period == params.m,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullPeriodCheck {
    pub coprime_ok: bool,
    pub prime_factor_ok: bool,
    pub four_ok: bool,
    pub predicted_full: bool,
}

pub(crate) fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// Distinct prime factors of `n` by trial division, ascending.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
    }
    // 6k ± 1 wheel
    let mut k: u64 = 5;
    while k.checked_mul(k).is_some_and(|kk| kk <= n) {
        for p in [k, k + 2] {
            if n.is_multiple_of(p) {
                out.push(p);
                while n.is_multiple_of(p) {
                    n /= p;
                }
            }
        }
        k += 6;
    }
    if n > 1 {
        out.push(n);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Evaluates the three conditions under which a mixed LCG attains period `m`
/// from every seed.
pub fn check_full_period_conditions(params: &LcgParams) -> FullPeriodCheck {
    let (a, b, m) = (params.a, params.b, params.m);
    let coprime_ok = gcd(b, m) == 1;
    // a ≡ 1 (mod p), written so that a = 0 needs no signed arithmetic
    let prime_factor_ok = distinct_prime_factors(m).iter().all(|&p| a % p == 1 % p);
    let four_ok = m % 4 != 0 || a % 4 == 1;
    FullPeriodCheck {
        coprime_ok,
        prime_factor_ok,
        four_ok,
        predicted_full: coprime_ok && prime_factor_ok && four_ok,
    }
}

/// Fibonacci linear feedback shift register parameters.
///
/// Tap `t` (1-based) reads register bit `width - t`; the feedback bit is
/// shifted in at the top and the output is the bit shifted out of bit 0.
/// With this convention taps `{w, t}` realise the trinomial `x^w + x^t + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LfsrParams {
    width: u32,
    taps: Vec<u32>,
    seed: u64,
}

impl Default for LfsrParams {
    /// `x^31 + x^28 + 1`, seed 1: period `2^31 - 1`.
    fn default() -> Self {
        Self {
            width: 31,
            taps: vec![28, 31],
            seed: 1,
        }
    }
}

impl LfsrParams {
    pub fn new(width: u32, taps: &[u32], seed: u64) -> Result<Self> {
        if !(2..=64).contains(&width) {
            return Err(Error::InvalidParameter(format!(
                "register width must be in [2, 64], got {width}"
            )));
        }
        if taps.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one tap is required".into(),
            ));
        }
        if let Some(&t) = taps.iter().find(|&&t| t == 0 || t > width) {
            return Err(Error::InvalidParameter(format!(
                "tap {t} outside [1, {width}]"
            )));
        }
        if seed == 0 {
            return Err(Error::InvalidParameter(
                "seed must be nonzero (the all-zero register is a fixed point)".into(),
            ));
        }
        if width < 64 && seed >> width != 0 {
            return Err(Error::InvalidParameter(format!(
                "seed {seed} does not fit in {width} bits"
            )));
        }
        let mut taps = taps.to_vec();
        taps.sort_unstable();
        taps.dedup();
        Ok(Self { width, taps, seed })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn taps(&self) -> &[u32] {
        &self.taps
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn tap_mask(&self) -> u64 {
        self.taps
            .iter()
            .fold(0u64, |acc, &t| acc | 1u64 << (self.width - t))
    }

    pub fn iter(&self) -> Lfsr {
        Lfsr {
            state: self.seed,
            mask: self.tap_mask(),
            top: self.width - 1,
        }
    }

    /// Period of the register state sequence started from `seed`.
    pub fn period(&self) -> u64 {
        let mask = self.tap_mask();
        let top = self.width - 1;
        detect_cycle(self.seed, |s| lfsr_step(s, mask, top)).0
    }
}

#[inline]
fn lfsr_step(state: u64, mask: u64, top: u32) -> u64 {
    let feedback = (state & mask).count_ones() as u64 & 1;
    (state >> 1) | (feedback << top)
}

#[derive(Debug, Clone)]
pub struct Lfsr {
    state: u64,
    mask: u64,
    top: u32,
}

impl Iterator for Lfsr {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        let out = (self.state & 1) as u8;
        self.state = lfsr_step(self.state, self.mask, self.top);
        Some(out)
    }
}

pub fn lfsr_generate(params: &LfsrParams, count: usize) -> Result<Vec<u8>> {
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    Ok(params.iter().take(count).collect())
}
