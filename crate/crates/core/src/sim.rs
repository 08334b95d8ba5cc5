//! Seeded Monte Carlo word-error-rate estimation over the mod-2^r AWGN
//! setup, with per-level first-error attribution and Wilson confidence
//! intervals. Aggregation is defined so that any partition of the trial
//! range into chunks produces identical results.

use alloc::vec;
use alloc::vec::Vec;

use crate::analysis::nvnr_db;
use crate::decode::{multilevel_decode, DecoderConfig};
use crate::error::Error;
use crate::lattice::LatticeSpec;
use crate::math;
use crate::rng::{fill_standard_normal, stream_rng, uniform_int, DOMAIN_SIM};

/// z for a two-sided 95% interval.
const Z95: f64 = 1.959963984540054;

/// Trials are evaluated in chunks of this size; early stopping is only
/// checked at chunk boundaries so the result is worker-independent.
pub const CHUNK: u64 = 1024;

/// Outcome of one decode trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub error: bool,
    /// 0 = correct, 1..=r = first erroneous partial-decode level,
    /// r+1 = error only in the final integer stage.
    pub first_error_level: usize,
}

/// Run a single seeded trial: draw a random lattice point, add N(0, s^2)
/// noise, decode, and compare.
pub fn trial_outcome(
    spec: &LatticeSpec,
    sigma: f64,
    config: &DecoderConfig,
    seed: u64,
    point_index: u64,
    trial: u64,
) -> Result<TrialOutcome, Error> {
    let n = spec.n();
    let r = spec.levels();
    let mut rng = stream_rng(seed, DOMAIN_SIM, point_index, trial);
    let bound = 1i64 << (r + 1);
    let lambda: Vec<i64> = (0..n).map(|_| uniform_int(&mut rng, -bound, bound)).collect();
    let x = spec.encode(&lambda)?;
    let mut noise = vec![0.0; n];
    fill_standard_normal(&mut rng, &mut noise);
    let y: Vec<f64> = x.iter().zip(&noise).map(|(&xi, &ni)| xi as f64 + sigma * ni).collect();
    let result = multilevel_decode(&y, sigma, spec, config)?;
    if result.lambda == lambda {
        return Ok(TrialOutcome { error: false, first_error_level: 0 });
    }
    // Attribute the error to the first level whose bit decision differs
    // from the bits of the transmitted message.
    let profile = spec.profile();
    for l in 1..=r {
        for k in 0..n {
            let p = profile.level_of(k + 1);
            let truth = if p < l {
                (lambda[k].rem_euclid(1i64 << (r - p)) >> (l - 1 - p)) & 1
            } else {
                0
            };
            if result.per_level[l - 1][k] as i64 != truth {
                return Ok(TrialOutcome { error: true, first_error_level: l });
            }
        }
    }
    Ok(TrialOutcome { error: true, first_error_level: r + 1 })
}

/// Result of one simulated operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimRecord {
    pub sigma: f64,
    pub nvnr_db: f64,
    pub trials: u64,
    pub errors: u64,
    /// Length r+1: first-error counts for levels 1..r, then the final
    /// integer stage.
    pub level_errors: Vec<u64>,
    pub p_e: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub point_index: u64,
    pub stopped_early: bool,
}

/// Wilson score interval for k successes in n trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let center = p + z2 / (2.0 * nf);
    let half = Z95 * math::sqrt(p * (1.0 - p) / nf + z2 / (4.0 * nf * nf));
    let lo = if k == 0 { 0.0 } else { ((center - half) / denom).max(0.0) };
    let hi = if k == n { 1.0 } else { ((center + half) / denom).min(1.0) };
    (lo, hi)
}

/// Stopping rule for one simulation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub max_trials: u64,
    /// Stop (at a chunk boundary) once at least this many errors are seen;
    /// 0 disables early stopping.
    pub target_errors: u64,
}

impl StopRule {
    pub fn fixed(max_trials: u64) -> Self {
        StopRule { max_trials, target_errors: 0 }
    }
    pub fn until_errors(max_trials: u64, target_errors: u64) -> Self {
        StopRule { max_trials, target_errors }
    }
}

/// Per-chunk tallies; additive, so chunk results can be combined in trial
/// order regardless of which worker produced them.
#[derive(Debug, Clone, Default)]
pub struct ChunkTally {
    pub trials: u64,
    pub errors: u64,
    pub level_errors: Vec<u64>,
}

/// Evaluate one chunk of trials serially.
pub fn run_chunk(
    spec: &LatticeSpec,
    sigma: f64,
    config: &DecoderConfig,
    seed: u64,
    point_index: u64,
    range: core::ops::Range<u64>,
) -> Result<ChunkTally, Error> {
    let r = spec.levels();
    let mut tally = ChunkTally { trials: 0, errors: 0, level_errors: vec![0; r + 1] };
    for t in range {
        let out = trial_outcome(spec, sigma, config, seed, point_index, t)?;
        tally.trials += 1;
        if out.error {
            tally.errors += 1;
            tally.level_errors[out.first_error_level - 1] += 1;
        }
    }
    Ok(tally)
}

/// Run one operating point through a chunk evaluator. The evaluator is
/// handed the chunk ranges for a batch and must return tallies in the same
/// order; a serial caller and a parallel pool therefore aggregate
/// identically. Early stopping is decided per batch, after all chunks of
/// the batch are merged.
pub fn run_point_with<F>(
    spec: &LatticeSpec,
    sigma: f64,
    seed: u64,
    point_index: u64,
    stop: StopRule,
    batch_chunks: u64,
    mut eval: F,
) -> Result<SimRecord, Error>
where
    F: FnMut(&[core::ops::Range<u64>]) -> Result<Vec<ChunkTally>, Error>,
{
    let r = spec.levels();
    let mut trials = 0u64;
    let mut errors = 0u64;
    let mut level_errors = vec![0u64; r + 1];
    let mut stopped_early = false;
    let batch = CHUNK * batch_chunks.max(1);
    while trials < stop.max_trials {
        let hi = (trials + batch).min(stop.max_trials);
        let ranges: Vec<core::ops::Range<u64>> = (trials..hi)
            .step_by(CHUNK as usize)
            .map(|lo| lo..(lo + CHUNK).min(hi))
            .collect();
        let tallies = eval(&ranges)?;
        for t in tallies {
            trials += t.trials;
            errors += t.errors;
            for (acc, v) in level_errors.iter_mut().zip(&t.level_errors) {
                *acc += v;
            }
        }
        if stop.target_errors > 0 && errors >= stop.target_errors && trials < stop.max_trials {
            stopped_early = true;
            break;
        }
    }
    let (ci_low, ci_high) = wilson_interval(errors, trials);
    Ok(SimRecord {
        sigma,
        nvnr_db: nvnr_db(spec.profile(), sigma),
        trials,
        errors,
        level_errors,
        p_e: errors as f64 / trials as f64,
        ci_low,
        ci_high,
        seed,
        point_index,
        stopped_early,
    })
}

/// Serial simulation of one operating point.
pub fn run_point(
    spec: &LatticeSpec,
    sigma: f64,
    config: &DecoderConfig,
    seed: u64,
    point_index: u64,
    stop: StopRule,
) -> Result<SimRecord, Error> {
    run_point_with(spec, sigma, seed, point_index, stop, 1, |ranges| {
        ranges
            .iter()
            .map(|rg| run_chunk(spec, sigma, config, seed, point_index, rg.clone()))
            .collect()
    })
}

/// Sweep a list of noise levels; point_index is the grid position, so a
/// sweep and a single-point run at the same index agree trial-for-trial.
pub fn vnr_sweep(
    spec: &LatticeSpec,
    sigmas: &[f64],
    config: &DecoderConfig,
    seed: u64,
    stop: StopRule,
) -> Result<Vec<SimRecord>, Error> {
    if sigmas.is_empty() {
        return Err(Error::EmptyGrid);
    }
    sigmas
        .iter()
        .enumerate()
        .map(|(i, &s)| run_point(spec, s, config, seed, i as u64, stop))
        .collect()
}
