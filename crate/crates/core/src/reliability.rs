//! Genie-aided Monte Carlo reliability estimation of the polarized
//! subchannels of W(Z/2Z, sigma^2 / 4^{l-1}) and nested profile selection.
//!
//! The channel is symmetric, so the all-zero codeword suffices; each trial
//! runs genie-corrected SC and records per-index conditional first-error
//! frequencies. Scores are bit-reproducible from (seed, trials, N, r,
//! sigma) and independent of how trials are split across workers.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{aliased_llr, mod_interval};
use crate::decode::genie_sc_errors;
use crate::error::Error;
use crate::profile::RateProfile;
use crate::rng::{fill_standard_normal, stream_rng, DOMAIN_RELIABILITY};
use crate::transform::log2_exact;

pub const MIN_TRIALS: u64 = 1_000;
pub const METHOD_GENIE_MC: &str = "genie-mc";

/// Per-level, per-subchannel reliability scores: estimated conditional
/// error probability, lower is better.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityTable {
    pub n: usize,
    pub r: usize,
    pub sigma: f64,
    pub method: String,
    pub trials: u64,
    pub seed: u64,
    /// scores[l-1][i]: level l (1-based), subchannel i (0-based row index).
    pub scores: Vec<Vec<f64>>,
}

/// Error counts for one level over a range of trials. Addition over
/// disjoint ranges is the whole estimate, so any chunking is equivalent.
pub fn genie_error_counts(
    sigma: f64,
    n: usize,
    level: usize,
    seed: u64,
    trials: core::ops::Range<u64>,
) -> Vec<u32> {
    let sigma_l = sigma / (1u64 << (level - 1)) as f64;
    let mut counts = vec![0u32; n];
    let mut noise = vec![0.0; n];
    let mut llrs = vec![0.0; n];
    for t in trials {
        let mut rng = stream_rng(seed, DOMAIN_RELIABILITY, level as u64, t);
        fill_standard_normal(&mut rng, &mut noise);
        for i in 0..n {
            let y = mod_interval(noise[i] * sigma_l, 2.0);
            llrs[i] = aliased_llr(y, sigma_l);
        }
        genie_sc_errors(&llrs, &mut counts);
    }
    counts
}

/// Estimate all r score rows serially. `eval`-style parallel variants must
/// sum [`genie_error_counts`] over a disjoint cover of 0..trials.
pub fn estimate_reliabilities(
    sigma: f64,
    n: usize,
    r: usize,
    trials: u64,
    seed: u64,
) -> Result<ReliabilityTable, Error> {
    estimate_reliabilities_with(sigma, n, r, trials, seed, |level, range| {
        genie_error_counts(sigma, n, level, seed, range)
    })
}

/// Reliability estimation with a caller-supplied trial evaluator (for
/// distributing trials across workers). The evaluator must return exactly
/// the counts of [`genie_error_counts`] for the given range.
pub fn estimate_reliabilities_with<F>(
    sigma: f64,
    n: usize,
    r: usize,
    trials: u64,
    seed: u64,
    mut eval: F,
) -> Result<ReliabilityTable, Error>
where
    F: FnMut(usize, core::ops::Range<u64>) -> Vec<u32>,
{
    assert!(sigma > 0.0 && r >= 1);
    log2_exact(n)?;
    if trials < MIN_TRIALS {
        return Err(Error::TooFewTrials { got: trials, min: MIN_TRIALS });
    }
    let mut scores = Vec::with_capacity(r);
    for level in 1..=r {
        let counts = eval(level, 0..trials);
        scores.push(counts.into_iter().map(|c| c as f64 / trials as f64).collect());
    }
    Ok(ReliabilityTable {
        n,
        r,
        sigma,
        method: String::from(METHOD_GENIE_MC),
        trials,
        seed,
        scores,
    })
}

/// How information sets are read off a reliability table.
#[derive(Debug, Clone, PartialEq)]
pub enum SelectPolicy {
    /// Keep index i at level l when score <= eps_l.
    Thresholds(Vec<f64>),
    /// Keep the K_l best-scoring indices per level (ties to lower index).
    Targets(Vec<usize>),
}

/// Select nested information sets from per-level scores. Each raw level
/// selection is unioned with the previous level's set, so the output
/// always satisfies the nesting invariant regardless of score noise.
pub fn select_profile(table: &ReliabilityTable, policy: &SelectPolicy) -> Result<RateProfile, Error> {
    let n = table.n;
    let r = table.r;
    match policy {
        SelectPolicy::Thresholds(eps) if eps.len() != r => {
            return Err(Error::BadPolicyLength { expected: r, got: eps.len() })
        }
        SelectPolicy::Targets(ks) => {
            if ks.len() != r {
                return Err(Error::BadPolicyLength { expected: r, got: ks.len() });
            }
            if ks.windows(2).any(|w| w[1] < w[0]) || ks.iter().any(|&k| k > n) {
                return Err(Error::TargetsDecreasing);
            }
        }
        _ => {}
    }
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(r);
    let mut prev: Vec<usize> = Vec::new();
    for l in 0..r {
        let row = &table.scores[l];
        let mut chosen: Vec<usize> = match policy {
            SelectPolicy::Thresholds(eps) => (1..=n).filter(|&k| row[k - 1] <= eps[l]).collect(),
            SelectPolicy::Targets(ks) => {
                let mut order: Vec<usize> = (1..=n).collect();
                order.sort_by(|&a, &b| {
                    row[a - 1].partial_cmp(&row[b - 1]).unwrap().then(a.cmp(&b))
                });
                let mut sel: Vec<usize> = order.into_iter().take(ks[l]).collect();
                sel.sort_unstable();
                sel
            }
        };
        // collect first: pushing while searching would unsort `chosen`
        let missing: Vec<usize> =
            prev.iter().copied().filter(|k| chosen.binary_search(k).is_err()).collect();
        chosen.extend(missing);
        chosen.sort_unstable();
        prev = chosen.clone();
        sets.push(chosen);
    }
    RateProfile::new(n, sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_chunk_invariant() {
        let a = estimate_reliabilities(0.5, 8, 2, 1000, 42).unwrap();
        let b = estimate_reliabilities(0.5, 8, 2, 1000, 42).unwrap();
        assert_eq!(a, b);
        // Splitting the trial range arbitrarily gives identical counts.
        let whole = genie_error_counts(0.5, 8, 1, 42, 0..1000);
        let mut split = genie_error_counts(0.5, 8, 1, 42, 0..137);
        for (x, y) in split.iter_mut().zip(genie_error_counts(0.5, 8, 1, 42, 137..1000)) {
            *x += y;
        }
        assert_eq!(whole, split);
    }

    #[test]
    fn tiny_sigma_all_reliable() {
        let t = estimate_reliabilities(1e-3, 8, 1, 1000, 1).unwrap();
        assert!(t.scores[0].iter().all(|&s| s == 0.0));
    }

    #[test]
    fn rejects_small_trial_count() {
        assert!(matches!(
            estimate_reliabilities(0.5, 8, 1, 10, 1),
            Err(Error::TooFewTrials { .. })
        ));
    }

    #[test]
    fn selection_policies() {
        let t = estimate_reliabilities(0.4, 16, 2, 2000, 3).unwrap();
        let p = select_profile(&t, &SelectPolicy::Targets(vec![4, 9])).unwrap();
        assert_eq!(p.size(1), 4);
        assert!(p.size(2) >= 9);
        // Huge threshold at level 1 keeps everything; empty selection allowed.
        let p = select_profile(&t, &SelectPolicy::Thresholds(vec![-1.0, 2.0])).unwrap();
        assert_eq!(p.size(2), 16);
        assert!(p.size(1) <= 16);
    }

    #[test]
    fn decreasing_targets_rejected() {
        let t = estimate_reliabilities(0.4, 8, 2, 1000, 3).unwrap();
        assert!(select_profile(&t, &SelectPolicy::Targets(vec![5, 3])).is_err());
    }
}
