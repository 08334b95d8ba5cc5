//! Multilevel decoding of polar and PAC lattices: strip one binary level
//! at a time from the mod-2^l residual, then round out the scaled integer
//! part.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{aliased_llr, mod_interval};
use crate::decode::engine::{list_decode, CodeSpec, Precoder};
use crate::decode::DecoderConfig;
use crate::error::Error;
use crate::lattice::{solve_unitriangular, LatticeKind, LatticeSpec};
use crate::math;
use crate::transform::{inverse_transform_int_in_place, transform_int_in_place};

/// Outcome of one multilevel decode.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Estimated message vector.
    pub lambda: Vec<i64>,
    /// The corresponding lattice point, lambda * gen.
    pub x: Vec<i64>,
    /// Decoded per-level binary vectors u_1..u_r (support inside I_l).
    pub per_level: Vec<Vec<u8>>,
    /// Integer residual recovered by the last stage.
    pub residual: Vec<i64>,
    /// Winning path metric per level.
    pub level_metrics: Vec<f64>,
}

/// Round y / 2^r to the nearest integers (ties to even) and apply the
/// exact integer inverse of the lifted G_N.
pub fn last_stage_round(y: &[f64], r: usize) -> Vec<i64> {
    let scale = (1u64 << r) as f64;
    let mut w: Vec<i128> = y.iter().map(|&v| math::round_even(v / scale) as i128).collect();
    inverse_transform_int_in_place(&mut w);
    w.into_iter().map(|v| v as i64).collect()
}

/// Decode an AWGN-corrupted lattice point. For l = 1..r the mod-2^l
/// residual y_l is formed by subtracting the already-decoded levels, its
/// scaled copy is fed to the level-l component decoder, and the last stage
/// rounds the remaining 2^r Z^N part. Decoding failure shows up only as a
/// wrong lambda.
pub fn multilevel_decode(
    y: &[f64],
    sigma: f64,
    spec: &LatticeSpec,
    config: &DecoderConfig,
) -> Result<DecodeResult, Error> {
    let n = spec.n();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: y.len() });
    }
    assert!(sigma > 0.0);
    let r = spec.levels();
    let profile = spec.profile();

    let pre = match (spec.kind(), config) {
        (LatticeKind::Polar, DecoderConfig::Sc) | (LatticeKind::Polar, DecoderConfig::Scl { .. }) => None,
        (LatticeKind::Pac, DecoderConfig::PacScl { conv, .. }) => {
            // The precoder the decoder assumes must be the lattice's own.
            if Some(conv) != spec.conv() {
                return Err(Error::DecoderMismatch);
            }
            Some(Precoder::from_dense(spec.t_dense().unwrap()))
        }
        _ => return Err(Error::DecoderMismatch),
    };
    let list_size = config.list_size();
    let zeros = vec![0u8; n];

    // Accumulated integer contribution sum_j u_j * Gbar_j.
    let mut acc = vec![0i64; n];
    let mut per_level: Vec<Vec<u8>> = Vec::with_capacity(r);
    let mut level_metrics = Vec::with_capacity(r);
    let mut llrs = vec![0.0; n];

    for l in 1..=r {
        let modulus = (1u64 << l) as f64;
        let half = (1u64 << (l - 1)) as f64;
        let sigma_l = sigma / half;
        for i in 0..n {
            let yl = mod_interval(y[i] - acc[i] as f64, modulus);
            llrs[i] = aliased_llr(yl / half, sigma_l);
        }
        let frozen = profile.frozen_mask(l);
        let code = CodeSpec { frozen: &frozen, frozen_vals: &zeros, conv: pre.as_ref() };
        let res = list_decode(&llrs, &code, list_size)?;
        let u_l = res.v;
        level_metrics.push(res.metric);
        // u_l * Gbar_l = 2^{l-1} * (u_l (*T) * G_N) over Z.
        let mut contrib: Vec<i64> = u_l.iter().map(|&b| b as i64).collect();
        if let Some(t) = spec.t_dense() {
            contrib = crate::lattice::mul_row_unitriangular(&contrib, t);
        }
        transform_int_in_place(&mut contrib);
        for i in 0..n {
            acc[i] += contrib[i] << (l - 1);
        }
        per_level.push(u_l);
    }

    // Last stage: y_{r+1} = y - acc = 2^r z' G_N + noise.
    let y_last: Vec<f64> = (0..n).map(|i| y[i] - acc[i] as f64).collect();
    let z_gn = last_stage_round(&y_last, r);
    let residual = match spec.t_dense() {
        Some(t) => {
            let w: Vec<i128> = z_gn.iter().map(|&v| v as i128).collect();
            solve_unitriangular(&w, t).into_iter().map(|v| v as i64).collect()
        }
        None => z_gn,
    };

    // lambda_k = sum_l u_l[k] 2^{l-1-p(k)} + 2^{r-p(k)} residual_k.
    let mut lambda = vec![0i64; n];
    for (k, lam) in lambda.iter_mut().enumerate() {
        let p = profile.level_of(k + 1);
        let mut v = residual[k].wrapping_shl((r - p) as u32);
        for (l, u_l) in per_level.iter().enumerate() {
            if u_l[k] == 1 {
                v = v.wrapping_add(1i64.wrapping_shl((l - p) as u32));
            }
        }
        *lam = v;
    }
    let x = spec.encode(&lambda)?;
    Ok(DecodeResult { lambda, x, per_level, residual, level_metrics })
}
