//! Deterministic stream derivation for every random draw in the crate.
//!
//! Each logical stream is a fresh ChaCha8 generator keyed by
//! (seed, domain, lane, index) through a splitmix64 expansion, so results
//! are bit-identical for any worker count or evaluation order. `lane`
//! distinguishes levels or grid points, `index` the trial.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use crate::math;

pub const DOMAIN_RELIABILITY: u64 = 0x52454c49; // "RELI"
pub const DOMAIN_SIM: u64 = 0x53494d55; // "SIMU"
pub const DOMAIN_CONV: u64 = 0x434f4e56; // "CONV"

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Fresh generator for the named stream.
pub fn stream_rng(seed: u64, domain: u64, lane: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = seed;
    let mut mix = [seed, domain, lane, index];
    for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
        state ^= mix[i].wrapping_mul(0xff51afd7ed558ccd);
        let w = splitmix64(&mut state);
        mix[i] = w;
        chunk.copy_from_slice(&w.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Uniform draw in (0, 1].
fn uniform_open01(rng: &mut ChaCha8Rng) -> f64 {
    (((rng.next_u64() >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
}

/// Standard normal samples by Box-Muller; fills `out`.
pub fn fill_standard_normal(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    let mut i = 0;
    while i < out.len() {
        let u1 = uniform_open01(rng);
        let u2 = uniform_open01(rng);
        let rad = math::sqrt(-2.0 * math::ln(u1));
        let ang = 2.0 * core::f64::consts::PI * u2;
        out[i] = rad * math::cos(ang);
        if i + 1 < out.len() {
            out[i + 1] = rad * math::sin(ang);
        }
        i += 2;
    }
}

/// Uniform integer in [lo, hi] (inclusive).
pub fn uniform_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    debug_assert!(hi >= lo);
    let span = (hi - lo) as u64 + 1;
    lo + (rng.next_u64() % span) as i64
}
