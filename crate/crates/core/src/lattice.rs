//! Generator matrices of polar and PAC lattices, exact encoding and
//! membership tests.
//!
//! A polar lattice generator is the lifted polar transform with row k
//! scaled by 2^p when k lies in I_{p+1} \ I_p. A PAC lattice additionally
//! precodes with an upper unitriangular convolution T; its generator is
//! the integer matrix D * T * G_N, equal to Tbar * Gbar where Tbar is the
//! dyadic lift of T.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::profile::{ConvolutionProfile, RateProfile};
use crate::transform::{gn_row, inverse_transform_int_in_place, transform_int_in_place};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Polar,
    Pac,
}

/// A matrix with dyadic-rational entries num[i][j] / 2^den_pow2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicMatrix {
    pub num: Vec<Vec<i64>>,
    pub den_pow2: u32,
}

impl DyadicMatrix {
    /// Entry (i, j), 0-based, as (numerator, power-of-two denominator)
    /// in lowest terms.
    pub fn entry(&self, i: usize, j: usize) -> (i64, u32) {
        let mut num = self.num[i][j];
        let mut den = self.den_pow2;
        while den > 0 && num % 2 == 0 && num != 0 {
            num /= 2;
            den -= 1;
        }
        if num == 0 {
            den = 0;
        }
        (num, den)
    }

    /// Integer value of entry (i, j) if it is integral.
    pub fn entry_int(&self, i: usize, j: usize) -> Option<i64> {
        let (num, den) = self.entry(i, j);
        (den == 0).then_some(num)
    }
}

/// An integer generator matrix together with the profile and precoder that
/// produced it. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    profile: RateProfile,
    conv: Option<ConvolutionProfile>,
    kind: LatticeKind,
    gen: Vec<Vec<i64>>,
    /// Dense T (present iff kind == Pac).
    t_dense: Option<Vec<Vec<u8>>>,
}

impl LatticeSpec {
    pub fn profile(&self) -> &RateProfile {
        &self.profile
    }

    pub fn conv(&self) -> Option<&ConvolutionProfile> {
        self.conv.as_ref()
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn levels(&self) -> usize {
        self.profile.levels()
    }

    /// The integer generator matrix (Gbar, or Gbar_pac).
    pub fn gen(&self) -> &[Vec<i64>] {
        &self.gen
    }

    pub fn t_dense(&self) -> Option<&[Vec<u8>]> {
        self.t_dense.as_deref()
    }

    /// log2 of the lattice volume, exact (Lemma-1 identity; unchanged by T).
    pub fn log2_volume(&self) -> u64 {
        self.profile.log2_volume()
    }

    /// x = lambda * gen over the integers, via the per-level butterfly
    /// rather than a dense multiply.
    pub fn encode(&self, lambda: &[i64]) -> Result<Vec<i64>, Error> {
        let n = self.n();
        if lambda.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: lambda.len() });
        }
        let mut v: Vec<i64> = lambda
            .iter()
            .enumerate()
            .map(|(i, &a)| a << self.profile.level_of(i + 1))
            .collect();
        if let Some(t) = &self.t_dense {
            v = mul_row_unitriangular(&v, t);
        }
        transform_int_in_place(&mut v);
        Ok(v)
    }

    /// Exact membership: true iff v / 2^den_pow2 lies in the lattice.
    /// Decided entirely in integer arithmetic.
    pub fn contains_dyadic(&self, v_num: &[i64], den_pow2: u32) -> Result<bool, Error> {
        let n = self.n();
        if v_num.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v_num.len() });
        }
        let mut w: Vec<i128> = v_num.iter().map(|&a| a as i128).collect();
        inverse_transform_int_in_place(&mut w);
        if let Some(t) = &self.t_dense {
            w = solve_unitriangular(&w, t);
        }
        for (i, &wi) in w.iter().enumerate() {
            let shift = den_pow2 + self.profile.level_of(i + 1) as u32;
            if wi & ((1i128 << shift) - 1) != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact membership for an integer vector.
    pub fn contains(&self, v: &[i64]) -> Result<bool, Error> {
        self.contains_dyadic(v, 0)
    }

    /// lambda for a known lattice point x = lambda * gen; None if x is not
    /// a lattice point.
    pub fn decode_exact(&self, x: &[i64]) -> Result<Option<Vec<i64>>, Error> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
        let mut w: Vec<i128> = x.iter().map(|&a| a as i128).collect();
        inverse_transform_int_in_place(&mut w);
        if let Some(t) = &self.t_dense {
            w = solve_unitriangular(&w, t);
        }
        let mut lambda = Vec::with_capacity(n);
        for (i, &wi) in w.iter().enumerate() {
            let p = self.profile.level_of(i + 1) as u32;
            if wi & ((1i128 << p) - 1) != 0 {
                return Ok(None);
            }
            lambda.push((wi >> p) as i64);
        }
        Ok(Some(lambda))
    }
}

/// Row-vector times upper unitriangular 0/1 matrix, over the integers.
pub(crate) fn mul_row_unitriangular(v: &[i64], t: &[Vec<u8>]) -> Vec<i64> {
    let n = v.len();
    let mut out = vec![0i64; n];
    for i in 0..n {
        if v[i] == 0 {
            continue;
        }
        for j in i..n {
            if t[i][j] == 1 {
                out[j] += v[i];
            }
        }
    }
    out
}

/// Solve x * T = b for upper unitriangular 0/1 T, exactly over Z.
pub(crate) fn solve_unitriangular(b: &[i128], t: &[Vec<u8>]) -> Vec<i128> {
    let n = b.len();
    let mut x = vec![0i128; n];
    for j in 0..n {
        let mut s = b[j];
        for i in 0..j {
            if t[i][j] == 1 {
                s = s.wrapping_sub(x[i]);
            }
        }
        x[j] = s;
    }
    x
}

/// Gbar for a polar lattice: lower-triangular, row k scaled by 2^p for
/// k in I_{p+1} \ I_p.
pub fn build_generator(profile: &RateProfile) -> LatticeSpec {
    let n = profile.n();
    let gen: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let scale = 1i64 << profile.level_of(i + 1);
            gn_row(n, i).into_iter().map(|e| e * scale).collect()
        })
        .collect();
    LatticeSpec { profile: profile.clone(), conv: None, kind: LatticeKind::Polar, gen, t_dense: None }
}

/// The dyadic lift Tbar of T: Tbar_{i,j} = 2^{p-q} T_{i,j} with
/// i in I_{p+1} \ I_p and j in I_{q+1} \ I_q. Satisfies D*T = Tbar*D.
pub fn lift_convolution(
    conv: &ConvolutionProfile,
    profile: &RateProfile,
) -> Result<DyadicMatrix, Error> {
    let n = profile.n();
    let t = conv.to_dense(n)?;
    let r = profile.levels() as u32;
    let mut num = vec![vec![0i64; n]; n];
    for i in 0..n {
        let p = profile.level_of(i + 1) as i64;
        for j in i..n {
            if t[i][j] == 1 {
                let q = profile.level_of(j + 1) as i64;
                num[i][j] = 1i64 << (r as i64 + p - q);
            }
        }
    }
    Ok(DyadicMatrix { num, den_pow2: r })
}

/// Gbar_pac = Tbar * Gbar = D * T * G_N; integer entries, same determinant
/// as the polar generator.
pub fn pac_generator(
    conv: &ConvolutionProfile,
    profile: &RateProfile,
) -> Result<LatticeSpec, Error> {
    let n = profile.n();
    let t = conv.to_dense(n)?;
    let mut gen = Vec::with_capacity(n);
    for i in 0..n {
        // row i of T * G_N over Z, then scaled by 2^p.
        let mut row = vec![0i64; n];
        for j in i..n {
            if t[i][j] == 1 {
                for (c, e) in gn_row(n, j).into_iter().enumerate() {
                    row[c] += e;
                }
            }
        }
        let scale = 1i64 << profile.level_of(i + 1);
        for e in &mut row {
            *e *= scale;
        }
        gen.push(row);
    }
    Ok(LatticeSpec {
        profile: profile.clone(),
        conv: Some(conv.clone()),
        kind: LatticeKind::Pac,
        gen,
        t_dense: Some(t),
    })
}
