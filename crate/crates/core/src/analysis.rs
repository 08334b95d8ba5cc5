//! Exact structural analysis: component-code weight enumeration,
//! multilevel minimum distance, lattice minimal-vector counting,
//! small-dimension lattice enumeration, and the NVNR with its
//! capacity-gap decomposition.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{aliased_entropy, partition_capacity};
use crate::error::Error;
use crate::lattice::{LatticeKind, LatticeSpec};
use crate::math;
use crate::profile::RateProfile;

/// Exhaustive-enumeration cap: 2^K codewords.
pub const MAX_ENUM_K: usize = 28;

/// Minimum Hamming distance and the number of codewords achieving it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightProfile {
    pub d_h: u32,
    pub count: u64,
    pub k: usize,
}

/// Exact (d_H, count) of the binary code spanned by `rows` (bitmasks over
/// up to 64 positions), by Gray-code enumeration of all 2^K - 1 nonzero
/// codewords.
pub fn code_weight_enum(rows: &[u64]) -> Result<Option<WeightProfile>, Error> {
    let k = rows.len();
    if k > MAX_ENUM_K {
        return Err(Error::EnumerationTooLarge { dim: k, limit: MAX_ENUM_K });
    }
    if k == 0 {
        return Ok(None);
    }
    let mut cw = 0u64;
    let mut best = u32::MAX;
    let mut count = 0u64;
    for g in 1u64..(1u64 << k) {
        cw ^= rows[g.trailing_zeros() as usize];
        let w = cw.count_ones();
        if w < best {
            best = w;
            count = 1;
        } else if w == best {
            count += 1;
        }
    }
    Ok(Some(WeightProfile { d_h: best, count, k }))
}

/// Generator rows (as bitmasks) of the level-l component code: rows of G_N
/// (or T * G_N for a PAC lattice) with indices in I_l, over F_2.
pub fn level_code_rows(spec: &LatticeSpec, l: usize) -> Vec<u64> {
    let n = spec.n();
    debug_assert!(n <= 64);
    let profile = spec.profile();
    let mut rows = Vec::with_capacity(profile.size(l));
    for &k in profile.set(l) {
        let i = k - 1;
        let mut e = vec![0u8; n];
        match spec.t_dense() {
            Some(t) => {
                for j in i..n {
                    e[j] = t[i][j];
                }
            }
            None => e[i] = 1,
        }
        crate::transform::polar_transform_f2_in_place(&mut e).unwrap();
        let mut mask = 0u64;
        for (j, &b) in e.iter().enumerate() {
            mask |= (b as u64) << j;
        }
        rows.push(mask);
    }
    rows
}

/// Minimum squared distance of the multilevel lattice:
/// min over { 4^{l-1} d_H(C_l) } for l = 1..r, together with 4^r.
/// Levels with no nonzero codeword contribute nothing.
pub fn multilevel_dmin(profiles: &[Option<WeightProfile>], r: usize) -> u64 {
    let mut best = 1u64 << (2 * r);
    for (l, wp) in profiles.iter().enumerate() {
        if let Some(wp) = wp {
            let term = (wp.d_h as u64) << (2 * l);
            if term < best {
                best = term;
            }
        }
    }
    best
}

/// d^2_min of a lattice spec via its component codes.
pub fn multilevel_dmin_of_spec(spec: &LatticeSpec) -> Result<u64, Error> {
    let r = spec.levels();
    let mut profiles = Vec::with_capacity(r);
    for l in 1..=r {
        profiles.push(code_weight_enum(&level_code_rows(spec, l))?);
    }
    Ok(multilevel_dmin(&profiles, r))
}

/// How minimal vectors are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountConvention {
    /// All lattice vectors of minimum norm (antipodal pairs counted twice).
    LatticeVectors,
    /// Antipodal pairs counted once.
    AntipodalPairs,
    /// Minimum-weight codewords of the level-1 component code.
    Codewords,
}

/// Minimum squared distance and the count of vectors achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeDistanceReport {
    pub d2_min: u64,
    pub n_min: u64,
    /// 4^{l-1} d_H(C_l) per level (None when the level code is trivial).
    pub level_terms: Vec<Option<u64>>,
    /// The 4^r term from the integer sublattice.
    pub top_term: u64,
    /// Levels (1-based) achieving the minimum; 0 denotes the top term.
    pub achieving: Vec<usize>,
    pub convention: CountConvention,
    /// Counts under the two alternative conventions, for cross-checks.
    pub n_lattice_vectors: u64,
    pub n_antipodal_pairs: u64,
    pub n_codewords: u64,
}

/// Count minimal vectors exactly. Requires N <= 32 and the minimum to be
/// achieved strictly at level 1 (so every minimal vector has entries in
/// {-1, 0, +1} supported on a minimum-weight level-1 codeword); otherwise
/// falls back to full bounded enumeration for N <= 6.
///
/// The reported `n_min` uses the lattice-vector convention, which
/// reproduces the published counts for the N=16 reference profile; the
/// alternative conventions are returned alongside.
pub fn lattice_min_vectors(spec: &LatticeSpec) -> Result<LatticeDistanceReport, Error> {
    let n = spec.n();
    let r = spec.levels();
    if n > 32 {
        return Err(Error::MinVectorPrecondition);
    }
    let mut profiles = Vec::with_capacity(r);
    for l in 1..=r {
        profiles.push(code_weight_enum(&level_code_rows(spec, l))?);
    }
    let level_terms: Vec<Option<u64>> = profiles
        .iter()
        .enumerate()
        .map(|(l, wp)| wp.map(|w| (w.d_h as u64) << (2 * l)))
        .collect();
    let top_term = 1u64 << (2 * r);
    let d2 = multilevel_dmin(&profiles, r);
    let mut achieving: Vec<usize> = level_terms
        .iter()
        .enumerate()
        .filter_map(|(l, t)| (*t == Some(d2)).then_some(l + 1))
        .collect();
    if top_term == d2 {
        achieving.push(0);
    }

    let level1_strict = matches!(level_terms[0], Some(t) if t == d2)
        && level_terms[1..].iter().all(|t| t.map_or(true, |v| v > d2))
        && top_term > d2;

    let (n_vec, n_cw) = if level1_strict {
        count_sign_patterns(spec, &profiles[0].unwrap())?
    } else if n <= 6 {
        let gram = gram_of_int(spec.gen());
        let (min2, cnt) = enumerate_gram_int(&gram, 1)?;
        debug_assert_eq!(min2 as u64, d2);
        (cnt, 0)
    } else {
        return Err(Error::MinVectorPrecondition);
    };

    Ok(LatticeDistanceReport {
        d2_min: d2,
        n_min: n_vec,
        level_terms,
        top_term,
        achieving,
        convention: CountConvention::LatticeVectors,
        n_lattice_vectors: n_vec,
        n_antipodal_pairs: n_vec / 2,
        n_codewords: n_cw,
    })
}

/// Enumerate minimum-weight level-1 codewords, then every sign assignment
/// on each support, keeping those that pass the exact membership test.
fn count_sign_patterns(spec: &LatticeSpec, wp: &WeightProfile) -> Result<(u64, u64), Error> {
    let n = spec.n();
    let rows = level_code_rows(spec, 1);
    let d = wp.d_h as usize;
    let mut n_vec = 0u64;
    let mut n_cw = 0u64;
    let mut cw = 0u64;
    for g in 1u64..(1u64 << rows.len()) {
        cw ^= rows[g.trailing_zeros() as usize];
        if cw.count_ones() != wp.d_h {
            continue;
        }
        n_cw += 1;
        let support: Vec<usize> = (0..n).filter(|&j| cw >> j & 1 == 1).collect();
        let mut v = vec![0i64; n];
        for signs in 0..(1u64 << d) {
            for (b, &j) in support.iter().enumerate() {
                v[j] = if signs >> b & 1 == 1 { -1 } else { 1 };
            }
            if spec.contains(&v)? {
                n_vec += 1;
            }
        }
        for &j in &support {
            v[j] = 0;
        }
    }
    Ok((n_vec, n_cw))
}

fn gram_of_int(gen: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let n = gen.len();
    let mut g = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = gen[i].iter().zip(&gen[j]).map(|(&a, &b)| a as i128 * b as i128).sum();
        }
    }
    g
}

/// Bareiss fraction-free determinant; exact for the sizes used here.
pub fn bareiss_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn minor(m: &[Vec<i128>], row: usize, col: usize) -> Vec<Vec<i128>> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| {
            r.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &v)| v).collect()
        })
        .collect()
}

/// Exact shortest-vector enumeration on an integer Gram matrix scaled by
/// `den` (norms are gram-values / den). Returns (min scaled norm, count).
/// The coefficient box |c_i| <= sqrt(B (M^{-1})_{ii}) is provably
/// sufficient for any norm bound B; B starts at the best basis-row norm.
fn enumerate_gram_int(gram: &[Vec<i128>], _den: i128) -> Result<(i128, u64), Error> {
    let dim = gram.len();
    if dim == 0 || dim > 6 {
        return Err(Error::EnumerationTooLarge { dim, limit: 6 });
    }
    let det = bareiss_det(gram);
    if det <= 0 {
        return Err(Error::SingularMatrix);
    }
    let bound_norm = (0..dim).map(|i| gram[i][i]).min().unwrap();
    if bound_norm <= 0 {
        return Err(Error::SingularMatrix);
    }
    let mut bounds = Vec::with_capacity(dim);
    for i in 0..dim {
        // adj_ii = det of the (i,i) minor (symmetric PSD, so positive).
        let adj = bareiss_det(&minor(gram, i, i));
        let val = (bound_norm as f64) * (adj as f64) / (det as f64);
        bounds.push(math::floor(math::sqrt(val) + 1e-9) as i64);
    }
    let mut best = bound_norm;
    let mut count = 0u64;
    let mut coeff = vec![0i64; dim];
    enumerate_rec(gram, &bounds, &mut coeff, 0, &mut best, &mut count);
    Ok((best, count))
}

fn norm_of(gram: &[Vec<i128>], c: &[i64]) -> i128 {
    let dim = c.len();
    let mut s = 0i128;
    for i in 0..dim {
        for j in 0..dim {
            s += c[i] as i128 * c[j] as i128 * gram[i][j];
        }
    }
    s
}

fn enumerate_rec(
    gram: &[Vec<i128>],
    bounds: &[i64],
    coeff: &mut Vec<i64>,
    i: usize,
    best: &mut i128,
    count: &mut u64,
) {
    if i == coeff.len() {
        if coeff.iter().all(|&c| c == 0) {
            return;
        }
        let nrm = norm_of(gram, coeff);
        if nrm < *best {
            *best = nrm;
            *count = 1;
        } else if nrm == *best {
            *count += 1;
        }
        return;
    }
    for c in -bounds[i]..=bounds[i] {
        coeff[i] = c;
        enumerate_rec(gram, bounds, coeff, i + 1, best, count);
    }
    coeff[i] = 0;
}

/// Exact (d^2_min, kissing number) of a small lattice given by a rational
/// generator nums / den, dim <= 4.
pub fn small_lattice_enumerate(nums: &[Vec<i64>], den: i64) -> Result<(f64, u64), Error> {
    let dim = nums.len();
    if dim > 4 {
        return Err(Error::EnumerationTooLarge { dim, limit: 4 });
    }
    let mut gram = vec![vec![0i128; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            gram[i][j] = nums[i].iter().zip(&nums[j]).map(|(&a, &b)| a as i128 * b as i128).sum();
        }
    }
    let (scaled, count) = enumerate_gram_int(&gram, 1)?;
    Ok((scaled as f64 / (den as f64 * den as f64), count))
}

/// Same enumeration from a rational Gram matrix gram_nums / den (for
/// lattices with no rational basis, e.g. the hexagonal one).
pub fn small_lattice_enumerate_gram(
    gram_nums: &[Vec<i64>],
    den: i64,
) -> Result<(f64, u64), Error> {
    let dim = gram_nums.len();
    if dim > 4 {
        return Err(Error::EnumerationTooLarge { dim, limit: 4 });
    }
    let gram: Vec<Vec<i128>> =
        gram_nums.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let (scaled, count) = enumerate_gram_int(&gram, den as i128)?;
    Ok((scaled as f64 / den as f64, count))
}

/// Normalized volume-to-noise ratio gamma = V^{2/N} / sigma^2, from the
/// exact log2 volume (no overflow at any N).
pub fn nvnr(profile: &RateProfile, sigma: f64) -> f64 {
    nvnr_scaled(profile, sigma, 1.0)
}

/// NVNR of the lattice scaled by a factor eta (rows multiplied by eta,
/// e.g. the 1/eta rescaling used to move an operating point).
pub fn nvnr_scaled(profile: &RateProfile, sigma: f64, eta: f64) -> f64 {
    let log2v = profile.log2_volume() as f64 + profile.n() as f64 * math::log2(eta);
    math::powf(2.0, 2.0 * log2v / profile.n() as f64) / (sigma * sigma)
}

/// 10 log10(gamma / 2 pi e), the decibel operating point.
pub fn nvnr_db(profile: &RateProfile, sigma: f64) -> f64 {
    let gamma = nvnr(profile, sigma);
    10.0 * math::log10(gamma / (2.0 * core::f64::consts::PI * core::f64::consts::E))
}

/// The capacity-gap decomposition of log2(gamma / 2 pi e):
/// 2 (C(Z/2^rZ, s^2) - sum K_l / N), plus 2 C(Z, s^2), plus
/// 2 h(2^r Z, s^2) - log2(2 pi e s^2). The terms sum to the exact value
/// up to quadrature tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct NvnrDecomposition {
    pub capacity_gap: f64,
    pub bottom: f64,
    pub top: f64,
}

impl NvnrDecomposition {
    pub fn sum(&self) -> f64 {
        self.capacity_gap + self.bottom + self.top
    }
}

pub fn nvnr_decomposition(profile: &RateProfile, sigma: f64) -> NvnrDecomposition {
    let n = profile.n() as f64;
    let r = profile.levels();
    let caps = partition_capacity(sigma, r);
    let rate_sum: f64 = (1..=r).map(|l| profile.size(l) as f64).sum::<f64>() / n;
    let two_pi_e = 2.0 * core::f64::consts::PI * core::f64::consts::E;
    NvnrDecomposition {
        capacity_gap: 2.0 * (caps.chain_total - rate_sum),
        bottom: 2.0 * caps.c_z,
        top: 2.0 * aliased_entropy((1u64 << r) as f64, sigma) - math::log2(two_pi_e * sigma * sigma),
    }
}

/// Convenience: d^2 and kissing data for a spec (used by report printers).
pub fn distance_report(spec: &LatticeSpec) -> Result<LatticeDistanceReport, Error> {
    lattice_min_vectors(spec)
}

/// True when the spec is a PAC lattice (report labeling helper).
pub fn is_pac(spec: &LatticeSpec) -> bool {
    spec.kind() == LatticeKind::Pac
}
