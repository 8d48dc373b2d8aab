//! Numerical evidence for non-univalence of the glued map: critical points
//! of the strip map `k`, the Landau-type derivative bounds along
//! `Im z = pi/2`, and Newton searches for distinct points with equal images.

use crate::maps::{k1_prime, region_of, EvalResult, RegionTag};
use crate::params::ConstructionParams;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

/// A located root of `k'` with its achieved residual.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalPoint {
    pub z: [f64; 2],
    pub residual: f64,
    pub branch: i64,
    pub in_core_strip: bool,
    pub converged: bool,
}

#[derive(Debug, Clone, Error)]
pub enum UnivalenceError {
    #[error(
        "critical-point branches inside the core strip need index ~{required:.3e}, \
         beyond double-precision phase resolution (limit {limit}); use a shallower x1"
    )]
    BranchPrecision { required: f64, limit: i64 },
}

/// Largest branch index whose root residual can still reach 1e-10 at double
/// precision: the residual floor is about `2 pi j * ulp(z)`.
pub const MAX_BRANCH: i64 = 10_000;

/// Branch indices whose roots land inside the core strip `T(x1)`, both
/// signs, `count` of each.
pub fn auto_branches_for_strip(
    p: &ConstructionParams,
    count: usize,
) -> Result<Vec<i64>, UnivalenceError> {
    let min_modulus = (-p.x1).exp() * 1.02;
    let j_min_f = ((min_modulus * min_modulus - p.damping * p.damping).max(0.0)).sqrt()
        / (2.0 * PI);
    if j_min_f > MAX_BRANCH as f64 {
        return Err(UnivalenceError::BranchPrecision {
            required: j_min_f,
            limit: MAX_BRANCH,
        });
    }
    let j_min = j_min_f.ceil() as i64 + 1;
    let mut branches = Vec::new();
    for j in j_min..j_min + count as i64 {
        branches.push(j);
        branches.push(-j);
    }
    Ok(branches)
}

/// Solves `k'(z) = 0`, i.e. `e^{-z} exp(e^{-z} - L) = 1`, on the given
/// logarithm branches. On branch `j` the equation reads
/// `e^{-z} - z - L - 2 pi i j = 0`; Newton starts from the asymptotic root
/// `z = -log(u_j)`, `u_j = L + 2 pi i j - log(L + 2 pi i j)`.
pub fn critical_points_k1(p: &ConstructionParams, branches: &[i64]) -> Vec<CriticalPoint> {
    let ell = p.damping;
    branches
        .iter()
        .map(|&j| {
            let offset = Complex64::new(0.0, 2.0 * PI * j as f64);
            let u0 = ell + offset;
            let u_seed = u0 - u0.ln();
            let mut z = -u_seed.ln();
            let mut converged = false;
            for _ in 0..80 {
                // Residual of e^{-z} - z - L - 2 pi i j, with the large
                // imaginary parts cancelled first.
                let u = (-z).exp();
                let g = (u - offset) - z - ell;
                let dg = -u - 1.0;
                let step = g / dg;
                z -= step;
                if step.norm() < 1e-16 * z.norm().max(1.0) {
                    converged = true;
                    break;
                }
            }
            let residual = k1_prime(z, p).norm();
            CriticalPoint {
                z: [z.re, z.im],
                residual,
                branch: j,
                in_core_strip: region_of(Complex64::new(z.re, z.im), p) == RegionTag::T,
                converged: converged || residual < 1e-9,
            }
        })
        .collect()
}

/// Landau-line report at one abscissa: values and derivative moduli of the
/// strip map at `-x + i pi/2`, against the bounds `|k| <= 2x`,
/// `|k'| >= e^{x-L} - 1`, and the chained floor `e^{x/2}`.
#[derive(Debug, Clone, Serialize)]
pub struct LandauRow {
    pub x: f64,
    pub k_modulus: f64,
    pub k_bound_ok: bool,
    pub kprime_modulus: f64,
    pub kprime_vs_exp_floor: bool,
    pub chain_holds: bool,
    pub kprime_vs_sqrt_floor: bool,
    pub k_margin: f64,
    pub kprime_margin: f64,
}

/// Values of `k` and `k'` on the half-height line, with the inner exponent
/// `e^{-z} = -i e^x` constructed exactly. Evaluating `exp(-z)` in floats
/// instead would leak `e^x cos(pi/2) ~ e^x * 6e-17` into the real part and
/// destroy the modulus identity `|exp(e^{-z} - L)| = e^{-L}` beyond
/// `x ~ 35`.
pub fn landau_line_values(p: &ConstructionParams, x: f64) -> (Complex64, Complex64) {
    let z = Complex64::new(-x, PI / 2.0);
    let inner = Complex64::new(0.0, -x.exp());
    let perturbation = (inner - p.damping).exp();
    let k = crate::maps::translation1(p) + z + perturbation;
    let kp = 1.0 - inner * perturbation;
    (k, kp)
}

/// Evaluates the Landau bounds on a grid of abscissae. `chain_holds`
/// records whether `e^{x-L} - 1 >= e^{x/2}` (true once `x` roughly exceeds
/// `2L`), separating the two inequalities in the report.
pub fn landau_bound_check(p: &ConstructionParams, x_grid: &[f64]) -> Vec<LandauRow> {
    x_grid
        .iter()
        .map(|&x| {
            let (kv, kpv) = landau_line_values(p, x);
            let k = kv.norm();
            let kp = kpv.norm();
            let exp_floor = (x - p.damping).exp() - 1.0;
            let sqrt_floor = (0.5 * x).exp();
            LandauRow {
                x,
                k_modulus: k,
                k_bound_ok: k <= 2.0 * x,
                kprime_modulus: kp,
                kprime_vs_exp_floor: kp >= exp_floor - 1e-9 * exp_floor.abs(),
                chain_holds: exp_floor >= sqrt_floor,
                kprime_vs_sqrt_floor: kp >= sqrt_floor,
                k_margin: 2.0 * x - k,
                kprime_margin: kp - sqrt_floor,
            }
        })
        .collect()
}

/// A verified pair of distinct points with equal images.
#[derive(Debug, Clone, Serialize)]
pub struct CollisionReport {
    pub z1: [f64; 2],
    pub z2: [f64; 2],
    pub residual: f64,
    pub separation: f64,
    pub both_in_domain: bool,
    pub method: CollisionMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CollisionMethod {
    CriticalPointPairing,
    Newton2d,
}

/// Acceptance thresholds for collision reports.
pub const COLLISION_RESIDUAL: f64 = 1e-9;
pub const COLLISION_MIN_SEPARATION: f64 = 1e-6;

/// Newton search for collisions `F(z1) = F(z2)`.
///
/// Each seed pair fixes the separation `d = z1 - z2` and Newton runs on the
/// midpoint: `Phi(mu) = F(mu + d/2) - F(mu - d/2)`, whose derivative
/// `F'(z1) - F'(z2)` is nonsingular across a simple critical point. This
/// keeps the pair distinct by construction while driving the residual to
/// zero.
pub fn collision_search(
    f: impl Fn(Complex64) -> EvalResult,
    seeds: &[(Complex64, Complex64)],
    domain_check: impl Fn(Complex64) -> bool,
    method: CollisionMethod,
) -> Vec<CollisionReport> {
    let mut out: Vec<CollisionReport> = Vec::new();
    let fd = |z: Complex64| -> Option<Complex64> {
        let h = 1e-6 * z.norm().max(1.0);
        let a = f(z + h).ok()?;
        let b = f(z - h).ok()?;
        Some((a - b) / (2.0 * h))
    };
    'seeds: for &(a, b) in seeds {
        let d = a - b;
        if d.norm() < COLLISION_MIN_SEPARATION {
            continue;
        }
        let mut mu = 0.5 * (a + b);
        let mut best: Option<(Complex64, f64)> = None;
        for _ in 0..60 {
            let z1 = mu + 0.5 * d;
            let z2 = mu - 0.5 * d;
            let (Ok(f1), Ok(f2)) = (f(z1), f(z2)) else {
                continue 'seeds;
            };
            let phi = f1 - f2;
            let res = phi.norm();
            if best.map_or(true, |(_, r)| res < r) {
                best = Some((mu, res));
            }
            if res < COLLISION_RESIDUAL * 1e-3 {
                break;
            }
            let (Some(d1), Some(d2)) = (fd(z1), fd(z2)) else {
                continue 'seeds;
            };
            let dphi = d1 - d2;
            if dphi.norm() < 1e-14 {
                break;
            }
            mu -= phi / dphi;
        }
        let Some((mu, _)) = best else { continue };
        let z1 = mu + 0.5 * d;
        let z2 = mu - 0.5 * d;
        let (Ok(f1), Ok(f2)) = (f(z1), f(z2)) else {
            continue;
        };
        let residual = (f1 - f2).norm();
        let separation = (z1 - z2).norm();
        if residual < COLLISION_RESIDUAL && separation > COLLISION_MIN_SEPARATION {
            let duplicate = out.iter().any(|r| {
                (Complex64::new(r.z1[0], r.z1[1]) - z1).norm() < 1e-6
                    && (Complex64::new(r.z2[0], r.z2[1]) - z2).norm() < 1e-6
            });
            if !duplicate {
                out.push(CollisionReport {
                    z1: [z1.re, z1.im],
                    z2: [z2.re, z2.im],
                    residual,
                    separation,
                    both_in_domain: domain_check(z1) && domain_check(z2),
                    method,
                });
            }
        }
    }
    out
}

/// Seed pairs straddling the critical points of the family-1 outer map
/// (`h'(z) = 1 + e^z = 0` at `z = i pi + 2 pi i k`), plus the separations
/// to try at each.
pub fn h1_collision_seeds(ks: &[i64], separations: &[f64]) -> Vec<(Complex64, Complex64)> {
    let mut seeds = Vec::new();
    for &k in ks {
        let center = Complex64::new(0.0, PI + 2.0 * PI * k as f64);
        for &s in separations {
            let half = Complex64::new(0.5 * s, 0.1 * s);
            seeds.push((center + half, center - half));
        }
    }
    seeds
}
