//! Deterministic counter-based random streams and the samplers built on them.
//!
//! A stream is keyed by `(seed, clip_id, op_index)`. The key is produced by
//! folding the three values through the SplitMix64 finalizer:
//!
//! ```text
//! k0  = mix64(seed ^ 0x9E3779B97F4A7C15)
//! k1  = mix64(k0 ^ clip_id * 0xD1B54A32D192ED03)
//! key = mix64(k1 ^ op_index * 0x8CB92BA72F3D8DD7)
//! ```
//!
//! Draw `i` (starting at 1) is `mix64(key + i * 0x9E3779B97F4A7C15)`, all
//! arithmetic wrapping mod 2^64. A stream's output therefore depends only on
//! its key and its own counter; no state is shared between streams.

use crate::error::{Error, Result};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const CLIP_MUL: u64 = 0xD1B5_4A32_D192_ED03;
const OP_MUL: u64 = 0x8CB9_2BA7_2F3D_8DD7;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    key: u64,
    counter: u64,
}

/// Derives the stream for one `(clip, op)` pair under a global seed.
pub fn rng_derive(seed: u64, clip_id: u64, op_index: u64) -> RngStream {
    let k0 = mix64(seed ^ GOLDEN);
    let k1 = mix64(k0 ^ clip_id.wrapping_mul(CLIP_MUL));
    let key = mix64(k1 ^ op_index.wrapping_mul(OP_MUL));
    RngStream { key, counter: 0 }
}

impl RngStream {
    pub fn new(seed: u64, clip_id: u64, op_index: u64) -> Self {
        rng_derive(seed, clip_id, op_index)
    }

    /// Child stream keyed off this stream's key; does not advance `self`.
    pub fn split(&self, index: u64) -> RngStream {
        RngStream {
            key: mix64(self.key ^ mix64(index.wrapping_add(1).wrapping_mul(OP_MUL))),
            counter: 0,
        }
    }

    /// Number of 64-bit draws taken so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in the open interval `(0, 1)`.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Fair coin.
    pub fn next_bool(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// `true` with probability `p`.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Uniform integer in `[0, n)` (Lemire's multiply-and-reject). `n == 0` returns 0.
    pub fn below(&mut self, n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = (self.next_u64() as u128) * (n as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn range_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        lo + self.below((hi - lo) as u64 + 1) as usize
    }

    /// `k` distinct indices from `0..n`, uniformly over all k-subsets, sorted.
    pub fn distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        debug_assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool.sort_unstable();
        pool
    }

    /// Standard normal via the Marsaglia polar method (second variate discarded).
    pub fn standard_normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }
}

/// Uniform real in `[lo, hi)`; `lo == hi` returns `lo`.
pub fn sample_uniform(rng: &mut RngStream, lo: f64, hi: f64) -> Result<f64> {
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    if lo == hi {
        return Ok(lo);
    }
    let v = lo + (hi - lo) * rng.next_f64();
    // rounding can land exactly on hi
    Ok(if v >= hi { hi.next_down().max(lo) } else { v })
}

/// Natural log of a Gamma(shape, 1) variate.
///
/// Shape >= 1 uses Marsaglia & Tsang (2000) squeeze/rejection with polar-method
/// normals. Shape < 1 boosts: `ln G(shape + 1) + ln(U) / shape`. Working in log
/// space keeps tiny shapes from underflowing to exactly 0.
fn ln_gamma_variate(rng: &mut RngStream, shape: f64) -> f64 {
    if shape < 1.0 {
        let boosted = ln_gamma_variate(rng, shape + 1.0);
        return boosted + rng.next_open01().ln() / shape;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = rng.standard_normal();
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = rng.next_open01();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return (d * v).ln();
        }
    }
}

/// Gamma(shape, 1) variate.
pub fn sample_gamma(rng: &mut RngStream, shape: f64) -> Result<f64> {
    if !shape.is_finite() || shape <= 0.0 {
        return Err(Error::param("shape", format!("must be > 0, got {shape}")));
    }
    Ok(ln_gamma_variate(rng, shape).exp())
}

/// Beta(alpha, beta) variate in the open interval `(0, 1)`.
///
/// Gamma-ratio method: `X / (X + Y)` with `X ~ Gamma(alpha)`, `Y ~ Gamma(beta)`,
/// X drawn first. Evaluated as `1 / (1 + exp(ln Y - ln X))`, then clamped to
/// `[2^-53, 1 - 2^-53]` so the result is never exactly 0 or 1.
pub fn sample_beta(rng: &mut RngStream, alpha: f64, beta: f64) -> Result<f64> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::param(name, format!("must be > 0, got {v}")));
        }
    }
    let lx = ln_gamma_variate(rng, alpha);
    let ly = ln_gamma_variate(rng, beta);
    let v = 1.0 / (1.0 + (ly - lx).exp());
    let eps = f64::EPSILON / 2.0;
    Ok(v.clamp(eps, 1.0 - eps))
}
