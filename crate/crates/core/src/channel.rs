//! The mod-2 AWGN channel W(Z/2Z, sigma^2) and its scaled versions:
//! aliased-Gaussian likelihoods, differential entropies and per-level
//! partition capacities. Logarithms of capacities/entropies are base 2;
//! LLRs are natural.

use alloc::vec::Vec;

use crate::math;

/// Absolute quadrature tolerance for entropies and capacities.
pub const QUAD_TOL: f64 = 1e-9;
/// Relative truncation threshold for the aliased-Gaussian series.
pub const SERIES_TOL: f64 = 1e-12;

/// W(Z/2Z, sigma^2): binary cosets of 2Z observed through Gaussian noise,
/// output folded into (-1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModTwoChannel {
    pub sigma: f64,
}

impl ModTwoChannel {
    pub fn new(sigma: f64) -> Self {
        assert!(sigma > 0.0, "sigma must be positive");
        Self { sigma }
    }

    /// The channel seen at decoding level l (1-based): noise amplitude
    /// divided by 2^{l-1}, i.e. variance sigma^2 / 4^{l-1}.
    pub fn at_level(&self, l: usize) -> Self {
        Self { sigma: self.sigma / (1u64 << (l - 1)) as f64 }
    }

    pub fn llr(&self, y: f64) -> f64 {
        aliased_llr(y, self.sigma)
    }

    /// Capacity C(Z/2Z, sigma^2) in bits.
    pub fn capacity(&self) -> f64 {
        1.0 - aliased_entropy(2.0, self.sigma) + aliased_entropy(1.0, self.sigma)
    }
}

/// Natural log of sum_k phi_sigma(y - b - 2k), up to an additive constant
/// shared by both cosets. Terms are accumulated max-shifted; the window
/// covers every term above `SERIES_TOL` relative weight and always
/// includes |k| <= ceil(6 sigma) + 1.
fn log_coset_density(y: f64, b: f64, sigma: f64) -> f64 {
    let kc = math::round_even((y - b) / 2.0) as i64;
    let kr = (math::ceil(8.0 * sigma) as i64) + 2;
    let inv2s2 = 1.0 / (2.0 * sigma * sigma);
    // Exponent at the nearest coset point dominates.
    let d0 = y - b - 2.0 * kc as f64;
    let emax = -d0 * d0 * inv2s2;
    let mut sum = 0.0;
    for k in kc - kr..=kc + kr {
        let d = y - b - 2.0 * k as f64;
        sum += math::exp(-d * d * inv2s2 - emax);
    }
    emax + math::ln(sum)
}

/// log( f(y|0) / f(y|1) ) on the representative interval (-1, 1].
/// Callers must reduce y mod 2 first.
pub fn aliased_llr(y: f64, sigma: f64) -> f64 {
    debug_assert!(y > -1.0 - 1e-9 && y <= 1.0 + 1e-9, "y outside (-1, 1]");
    log_coset_density(y, 0.0, sigma) - log_coset_density(y, 1.0, sigma)
}

/// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
const GK_NODES: [f64; 8] = [
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];
const GK_WEIGHTS: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let f0 = f(c);
    let mut kron = GK_WEIGHTS[0] * f0;
    let mut gauss = GAUSS_WEIGHTS[0] * f0;
    for i in 1..8 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        kron += GK_WEIGHTS[i] * s;
        if i % 2 == 0 {
            gauss += GAUSS_WEIGHTS[i / 2] * s;
        }
    }
    (kron * h, (kron - gauss).abs() * h)
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (v, e) = gk15(f, a, b);
    if e <= tol || depth >= 60 {
        return v;
    }
    let c = 0.5 * (a + b);
    adaptive(f, a, c, 0.5 * tol, depth + 1) + adaptive(f, c, b, 0.5 * tol, depth + 1)
}

/// Adaptive Gauss-Kronrod integral of f over [a, b] to absolute tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    adaptive(&f, a, b, tol, 0)
}

/// Density of the mZ-aliased Gaussian at t in (-m/2, m/2].
fn aliased_density(t: f64, m: f64, sigma: f64) -> f64 {
    let kr = (math::ceil(8.0 * sigma / m) as i64) + 2;
    let norm = 1.0 / (sigma * math::sqrt(2.0 * core::f64::consts::PI));
    let inv2s2 = 1.0 / (2.0 * sigma * sigma);
    let mut g = 0.0;
    for k in -kr..=kr {
        let d = t - m * k as f64;
        g += math::exp(-d * d * inv2s2);
    }
    g * norm
}

/// Differential entropy h(mZ, sigma^2) in bits of the mZ-aliased Gaussian
/// over (-m/2, m/2], by adaptive quadrature to `QUAD_TOL`.
pub fn aliased_entropy(m: f64, sigma: f64) -> f64 {
    assert!(m > 0.0 && sigma > 0.0);
    // h(mZ, sigma) = log2 m + h(Z, sigma/m); integrate on the unit cell.
    let s = sigma / m;
    let integrand = move |t: f64| {
        let g = aliased_density(t, 1.0, s);
        if g <= 0.0 {
            0.0
        } else {
            -g * math::log2(g)
        }
    };
    math::log2(m) + integrate(integrand, -0.5, 0.5, QUAD_TOL)
}

/// Per-level capacities of the partition chain Z / 2Z / ... / 2^r Z.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelCapacities {
    /// C(Z/2Z, sigma^2 / 4^{l-1}) for l = 1..r, in bits.
    pub levels: Vec<f64>,
    /// C(Z, sigma^2): the uncoded-bottom term.
    pub c_z: f64,
    /// C(Z, sigma^2 / 4^r): the top-level term.
    pub c_z_top: f64,
    /// C(Z/2^r Z, sigma^2), the chain total.
    pub chain_total: f64,
}

/// Capacities via the difference identity C(L/L', s^2) = C(L', s^2) - C(L, s^2)
/// with C(L, s^2) = log V(L) - h(L, s^2).
pub fn partition_capacity(sigma: f64, r: usize) -> LevelCapacities {
    assert!(sigma > 0.0 && r >= 1);
    let mut levels = Vec::with_capacity(r);
    for l in 1..=r {
        let s = sigma / (1u64 << (l - 1)) as f64;
        levels.push(1.0 - aliased_entropy(2.0, s) + aliased_entropy(1.0, s));
    }
    let c_z = -aliased_entropy(1.0, sigma);
    let s_top = sigma / (1u64 << r) as f64;
    let c_z_top = -aliased_entropy(1.0, s_top);
    let chain_total = r as f64 - aliased_entropy((1u64 << r) as f64, sigma) - c_z;
    LevelCapacities { levels, c_z, c_z_top, chain_total }
}

/// Fold x into the representative interval (-m/2, m/2].
pub fn mod_interval(x: f64, m: f64) -> f64 {
    let k = math::ceil(x / m - 0.5);
    x - m * k
}
