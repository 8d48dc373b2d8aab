//! Grötzsch modulus, Hersch-Pfluger distortion function `phi_K`, and its
//! hyperbolic-metric majorant `M_K(x) = 2 arctanh(phi_K(tanh(x/2)))`.
//!
//! The modulus is `mu(r) = (pi/2) K(r') / K(r)` with `r' = sqrt(1 - r^2)`,
//! evaluated through the arithmetic-geometric mean, and `phi_K` inverts it:
//! `phi_K(r) = mu^{-1}(mu(r) / K)`.

use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::RwLock;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DistortionError {
    #[error("argument {0} outside (0, 1)")]
    ModulusDomain(f64),
    #[error("distortion exponent K = {0} must be positive")]
    BadDilatation(f64),
    #[error("argument {0} outside [0, 1]")]
    PhiDomain(f64),
    #[error("argument {0} must be nonnegative")]
    NegativeDistance(f64),
}

/// Arithmetic-geometric mean with iteration count.
pub fn agm(a0: f64, b0: f64) -> (f64, u32) {
    let mut a = a0;
    let mut b = b0;
    let mut iters = 0;
    while (a - b).abs() > 1e-15 * a.abs().max(b.abs()) && iters < 40 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        a = an;
        b = bn;
        iters += 1;
    }
    (0.5 * (a + b), iters)
}

/// Memoized complete elliptic integral `K(k)` values, keyed by modulus bits.
/// Reads take the shared lock; insertions are insert-if-absent.
#[derive(Debug, Default)]
pub struct EllipticCache {
    map: RwLock<HashMap<u64, (f64, u32)>>,
}

impl EllipticCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `K(k) = pi / (2 agm(1, sqrt(1 - k^2)))` for `k` in `[0, 1)`.
    pub fn ellip_k(&self, k: f64) -> f64 {
        let bits = k.to_bits();
        if let Some(&(v, _)) = self.map.read().expect("cache lock").get(&bits) {
            return v;
        }
        let kp = ((1.0 - k) * (1.0 + k)).sqrt();
        let (m, iters) = agm(1.0, kp);
        let v = PI / (2.0 * m);
        self.map
            .write()
            .expect("cache lock")
            .entry(bits)
            .or_insert((v, iters));
        v
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_iters(&self) -> u32 {
        self.map
            .read()
            .expect("cache lock")
            .values()
            .map(|&(_, i)| i)
            .max()
            .unwrap_or(0)
    }
}

fn cache() -> &'static EllipticCache {
    static CACHE: std::sync::OnceLock<EllipticCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(EllipticCache::new)
}

/// Complete elliptic integral of the first kind, through the shared cache.
pub fn ellip_k(k: f64) -> f64 {
    cache().ellip_k(k)
}

/// Grötzsch modulus `mu(r) = (pi/2) K(r')/K(r)`.
///
/// Near the endpoints the direct ratio cancels badly, so `mu` switches to
/// the asymptotic `log(4/r)` below `1e-8` and to the reflection
/// `mu(r) = pi^2 / (4 mu(r'))` above `1 - 1e-8`.
pub fn groetzsch_mu(r: f64) -> Result<f64, DistortionError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(DistortionError::ModulusDomain(r));
    }
    if r < 1e-8 {
        return Ok((4.0 / r).ln());
    }
    if r > 1.0 - 1e-8 {
        let rp = ((1.0 - r) * (1.0 + r)).sqrt();
        return Ok(PI * PI / (4.0 * (4.0 / rp).ln()));
    }
    // mu(r) = (pi/2) * agm(1, r') / agm(1, r) since K(k) = pi/(2 agm(1, k')).
    let rp = ((1.0 - r) * (1.0 + r)).sqrt();
    let (num, _) = agm(1.0, rp);
    let (den, _) = agm(1.0, r);
    Ok(PI / 2.0 * num / den)
}

/// Derivative `mu'(r) = -pi^2 / (4 r (1 - r^2) K(r)^2)`.
fn mu_prime(r: f64) -> f64 {
    let k = ellip_k(r);
    -PI * PI / (4.0 * r * (1.0 - r * r) * k * k)
}

/// Inverse of the Grötzsch modulus: bracketed bisection with Newton polish.
///
/// For `y` below ~0.13 the true inverse is closer to 1 than one ulp, so the
/// returned value saturates near `1 - 1e-14`; `m_k` switches to a log-space
/// route before that matters.
pub fn inv_mu(y: f64) -> Result<f64, DistortionError> {
    if !(y > 0.0) {
        return Err(DistortionError::ModulusDomain(y));
    }
    if y > (4.0 / 1e-8f64).ln() {
        return Ok(4.0 * (-y).exp());
    }
    let mut lo = 1e-12;
    let mut hi = 1.0 - 1e-14;
    // mu is strictly decreasing: bisect to a short bracket.
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if groetzsch_mu(mid)? > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..4 {
        let f = groetzsch_mu(r)? - y;
        let step = f / mu_prime(r);
        let next = r - step;
        if next > lo && next < hi {
            r = next;
        }
    }
    Ok(r)
}

/// Hersch-Pfluger distortion `phi_K(r) = mu^{-1}(mu(r)/K)`, with the exact
/// endpoints `phi_K(0) = 0`, `phi_K(1) = 1`, and `phi_1 = id`. Values
/// `K < 1` give the inverse-distortion extension.
pub fn phi_k(big_k: f64, r: f64) -> Result<f64, DistortionError> {
    if !(big_k > 0.0) {
        return Err(DistortionError::BadDilatation(big_k));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(DistortionError::PhiDomain(r));
    }
    if r == 0.0 || r == 1.0 || big_k == 1.0 {
        return Ok(r);
    }
    inv_mu(groetzsch_mu(r)? / big_k)
}

/// Majorant of the quasiconformal Schwarz-Pick inequality:
/// `M_K(x) = 2 arctanh(phi_K(tanh(x/2)))`.
///
/// For large `x` the direct route degenerates (`tanh(x/2)` rounds to 1), so
/// the modulus of `tanh(x/2)` is computed from the exact complement
/// `sech(x/2)` through the reflection identity, and the final `arctanh`
/// goes through the complement as well.
pub fn m_k(big_k: f64, x: f64) -> Result<f64, DistortionError> {
    if !(big_k > 0.0) {
        return Err(DistortionError::BadDilatation(big_k));
    }
    if x < 0.0 {
        return Err(DistortionError::NegativeDistance(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if big_k == 1.0 {
        return Ok(x);
    }
    // mu(tanh(x/2)) via the reflection identity with r' = sech(x/2).
    let rp = 1.0 / (0.5 * x).cosh();
    let mu_r = if rp < 1e-8 {
        PI * PI / (4.0 * (4.0 / rp).ln())
    } else {
        PI * PI / (4.0 * groetzsch_mu(rp)?)
    };
    let target = mu_r / big_k;
    // phi = inv_mu(target); 2 arctanh(phi) = ln((1+phi)^2) - 2 ln(phi')
    // where phi' = inv_mu(pi^2/(4 target)) is the conjugate value, taken in
    // log form once it would underflow.
    let phi = inv_mu(target)?;
    if phi < 0.99 {
        Ok(2.0 * phi.atanh())
    } else {
        let conj_mu = PI * PI / (4.0 * target);
        let ln_phi_conj = if conj_mu > 19.0 {
            4.0f64.ln() - conj_mu
        } else {
            inv_mu(conj_mu)?.ln()
        };
        Ok((1.0 + phi).powi(2).ln() - 2.0 * ln_phi_conj)
    }
}

/// Grid report on monotonicity, concavity, and the elementary linear
/// majorant `M_K(x) <= K (x + log 4)`.
#[derive(Debug, Clone, Serialize)]
pub struct MkPropertyReport {
    pub big_k: f64,
    pub points: usize,
    pub x_max: f64,
    pub strictly_increasing: bool,
    pub concave: bool,
    pub linear_majorant_ok: bool,
    pub max_second_difference: f64,
}

pub fn verify_mk_properties(
    big_k: f64,
    x_max: f64,
    points: usize,
) -> Result<MkPropertyReport, DistortionError> {
    let n = points.max(3);
    let xs: Vec<f64> = (0..n).map(|i| x_max * i as f64 / (n - 1) as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| m_k(big_k, x)).collect::<Result<_, _>>()?;
    let mut increasing = true;
    let mut concave = true;
    let mut majorant = true;
    let mut max_dd = f64::NEG_INFINITY;
    for i in 1..n {
        if vals[i] <= vals[i - 1] {
            increasing = false;
        }
        if vals[i] > big_k * (xs[i] + 4.0f64.ln()) + 1e-9 {
            majorant = false;
        }
    }
    for i in 1..n - 1 {
        let dd = vals[i + 1] - 2.0 * vals[i] + vals[i - 1];
        max_dd = max_dd.max(dd);
        if dd > 1e-9 {
            concave = false;
        }
    }
    Ok(MkPropertyReport {
        big_k,
        points: n,
        x_max,
        strictly_increasing: increasing,
        concave,
        linear_majorant_ok: majorant,
        max_second_difference: max_dd,
    })
}

/// Checks `rho_out <= M_K(rho_in) + 1e-9` over sampled distance pairs
/// produced by an explicit K-quasiconformal test map.
pub fn qc_schwarz_pick_check(
    big_k: f64,
    samples: &[(f64, f64)],
) -> Result<bool, DistortionError> {
    for &(rho_in, rho_out) in samples {
        if rho_out > m_k(big_k, rho_in)? + 1e-9 {
            return Ok(false);
        }
    }
    Ok(true)
}
