//! Rate profiles (nested information sets) and convolutional precoders.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::Error;
use crate::rng::stream_rng;
use crate::transform::log2_exact;

/// The nested index sets I_1 <= ... <= I_r over [1, N] defining which rows
/// of the polar transform are scaled by which power of two. Indices are
/// 1-based and match the natural (non-bit-reversed) row order of G_N, so
/// profiles and reliability tables are interchangeable without permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateProfile {
    n: usize,
    r: usize,
    /// sets[l] is I_{l+1}, sorted ascending, 1-based.
    sets: Vec<Vec<usize>>,
    /// level_of[k] = p with k+1 in I_{p+1} \ I_p (p = r if in no set).
    levels: Vec<usize>,
}

impl RateProfile {
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self, Error> {
        log2_exact(n)?;
        let r = sets.len();
        if r == 0 || r > 62 || r >= 8 * core::mem::size_of::<usize>() {
            return Err(Error::BadLevelCount(r));
        }
        for (l, s) in sets.iter().enumerate() {
            let mut prev = 0usize;
            for &k in s {
                if k < 1 || k > n || k <= prev {
                    return Err(Error::BadIndexSet { level: l + 1 });
                }
                prev = k;
            }
        }
        for l in 0..r.saturating_sub(1) {
            let upper = &sets[l + 1];
            for &k in &sets[l] {
                if upper.binary_search(&k).is_err() {
                    return Err(Error::NotNested { lower: l + 1, upper: l + 2 });
                }
            }
        }
        let mut levels = vec![r; n];
        for (l, s) in sets.iter().enumerate().rev() {
            for &k in s {
                levels[k - 1] = l;
            }
        }
        Ok(Self { n, r, sets, levels })
    }

    /// A profile with every set equal to [1, N]; generates Z^N.
    pub fn full(n: usize, r: usize) -> Result<Self, Error> {
        let all: Vec<usize> = (1..=n).collect();
        Self::new(n, vec![all; r])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> usize {
        self.r
    }

    /// I_l, 1-based sorted indices (1 <= l <= r).
    pub fn set(&self, l: usize) -> &[usize] {
        &self.sets[l - 1]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// K_l = |I_l|.
    pub fn size(&self, l: usize) -> usize {
        self.sets[l - 1].len()
    }

    /// p such that row k (1-based) lies in I_{p+1} \ I_p; the row scaling
    /// of the generator is 2^p.
    pub fn level_of(&self, k: usize) -> usize {
        self.levels[k - 1]
    }

    /// Membership of 1-based row k in I_l.
    pub fn contains(&self, l: usize, k: usize) -> bool {
        self.levels[k - 1] < l
    }

    /// Frozen mask for the level-l component code: true outside I_l,
    /// 0-based over rows.
    pub fn frozen_mask(&self, l: usize) -> Vec<bool> {
        (1..=self.n).map(|k| !self.contains(l, k)).collect()
    }

    /// rN - sum K_l; equals log2 |det| of the generator exactly (and is
    /// therefore the exact log2 lattice volume).
    pub fn log2_volume(&self) -> u64 {
        let sum: u64 = self.sets.iter().map(|s| s.len() as u64).sum();
        (self.r as u64) * (self.n as u64) - sum
    }
}

/// An upper unitriangular 0/1 convolution matrix T, in circulant-tap or
/// dense form. Exactly one form is held; when both descriptions of a code
/// are available the caller must pick one before constructing this type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConvolutionProfile {
    /// T_{i,i+j} = 1 iff j in {0} union J, with strictly positive offsets J.
    Taps(Vec<usize>),
    /// Explicit dense upper unitriangular 0/1 matrix, row major.
    Dense(Vec<Vec<u8>>),
}

impl ConvolutionProfile {
    pub fn taps(j: &[usize]) -> Result<Self, Error> {
        let mut v = j.to_vec();
        v.sort_unstable();
        v.dedup();
        if v.first() == Some(&0) {
            return Err(Error::NotUnitriangular);
        }
        Ok(Self::Taps(v))
    }

    pub fn dense(t: Vec<Vec<u8>>) -> Result<Self, Error> {
        let n = t.len();
        for (i, row) in t.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for (j, &e) in row.iter().enumerate() {
                if e > 1 || (j < i && e != 0) || (j == i && e != 1) {
                    return Err(Error::NotUnitriangular);
                }
            }
        }
        Ok(Self::Dense(t))
    }

    pub fn identity() -> Self {
        Self::Taps(Vec::new())
    }

    /// Random dense upper unitriangular T: each strictly-upper entry is 1
    /// with probability `density`, drawn from the given seed.
    pub fn random(n: usize, density: f64, seed: u64) -> Self {
        let mut rng = stream_rng(seed, crate::rng::DOMAIN_CONV, 0, 0);
        let thresh = (density.clamp(0.0, 1.0) * (u32::MAX as f64)) as u64;
        let mut t = vec![vec![0u8; n]; n];
        for i in 0..n {
            t[i][i] = 1;
            for j in i + 1..n {
                if (rng.next_u32() as u64) < thresh {
                    t[i][j] = 1;
                }
            }
        }
        Self::Dense(t)
    }

    /// Materialize T as a dense matrix of size n.
    pub fn to_dense(&self, n: usize) -> Result<Vec<Vec<u8>>, Error> {
        match self {
            Self::Taps(j) => {
                let mut t = vec![vec![0u8; n]; n];
                for i in 0..n {
                    t[i][i] = 1;
                    for &off in j {
                        if i + off < n {
                            t[i][i + off] = 1;
                        }
                    }
                }
                Ok(t)
            }
            Self::Dense(t) => {
                if t.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: t.len() });
                }
                Ok(t.clone())
            }
        }
    }
}
