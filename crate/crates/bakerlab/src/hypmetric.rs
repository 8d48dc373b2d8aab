//! Hyperbolic distances: exact in model domains, certified two-sided bounds
//! in general simply connected domains.
//!
//! Normalization: the density in the unit disk is `2 / (1 - |z|^2)`, so
//! `rho_disk(0, r) = 2 arctanh r` and the density in a half-plane is
//! `1 / dist(z, boundary)`.

use crate::maps::{eval_f, EvalResult};
use crate::params::ConstructionParams;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("point {0} lies outside the domain")]
    OutsideDomain(Complex64),
    #[error("points are farther apart than the inclusion radius")]
    PointsTooFar,
    #[error("disk inclusion check failed at boundary sample {0}")]
    InclusionFailed(Complex64),
    #[error("path point {0} has non-positive boundary distance")]
    PathExitsDomain(Complex64),
    #[error("orbit left the model domain at step {0}")]
    OrbitLeftDomain(usize),
    #[error("map overflowed during orbit")]
    MapOverflow,
}

/// Hyperbolic distance in the unit disk.
pub fn rho_disk(z1: Complex64, z2: Complex64) -> Result<f64, MetricError> {
    for z in [z1, z2] {
        if z.norm() >= 1.0 {
            return Err(MetricError::OutsideDomain(z));
        }
    }
    let t = ((z1 - z2) / (1.0 - z1.conj() * z2)).norm();
    Ok(2.0 * t.atanh())
}

/// Hyperbolic distance in the right half-plane `Re z > 0`, by transport
/// through the Cayley map `z -> (z - 1)/(z + 1)`.
pub fn rho_halfplane(z1: Complex64, z2: Complex64) -> Result<f64, MetricError> {
    for z in [z1, z2] {
        if z.re <= 0.0 {
            return Err(MetricError::OutsideDomain(z));
        }
    }
    // |(w1 - w2) / (1 - conj(w1) w2)| with w = (z-1)/(z+1) simplifies to
    // |(z1 - z2) / (z1 + conj(z2))|; evaluate directly for stability.
    let t = ((z1 - z2) / (z1 + z2.conj())).norm();
    Ok(2.0 * t.atanh())
}

/// Hyperbolic distance in the upper half-plane `Im z > 0`.
pub fn rho_upper_halfplane(z1: Complex64, z2: Complex64) -> Result<f64, MetricError> {
    for z in [z1, z2] {
        if z.im <= 0.0 {
            return Err(MetricError::OutsideDomain(z));
        }
    }
    rho_halfplane(z1 * Complex64::new(0.0, -1.0), z2 * Complex64::new(0.0, -1.0))
}

/// Hyperbolic distance in the horizontal strip `|Im z| < halfwidth`,
/// transported to the right half-plane by `z -> exp(pi z / (2 halfwidth))`.
pub fn rho_strip(z1: Complex64, z2: Complex64, halfwidth: f64) -> Result<f64, MetricError> {
    for z in [z1, z2] {
        if z.im.abs() >= halfwidth {
            return Err(MetricError::OutsideDomain(z));
        }
    }
    let scale = PI / (2.0 * halfwidth);
    rho_halfplane((scale * z1).exp(), (scale * z2).exp())
}

/// Simple exact model domains, used as Schwarz-Pick references.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelDomain {
    Disk,
    RightHalfPlane,
    UpperHalfPlane,
    Strip { halfwidth: f64 },
}

impl ModelDomain {
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            ModelDomain::Disk => z.norm() < 1.0,
            ModelDomain::RightHalfPlane => z.re > 0.0,
            ModelDomain::UpperHalfPlane => z.im > 0.0,
            ModelDomain::Strip { halfwidth } => z.im.abs() < *halfwidth,
        }
    }

    pub fn rho(&self, z1: Complex64, z2: Complex64) -> Result<f64, MetricError> {
        match self {
            ModelDomain::Disk => rho_disk(z1, z2),
            ModelDomain::RightHalfPlane => rho_halfplane(z1, z2),
            ModelDomain::UpperHalfPlane => rho_upper_halfplane(z1, z2),
            ModelDomain::Strip { halfwidth } => rho_strip(z1, z2, *halfwidth),
        }
    }
}

/// Certified interval for a hyperbolic distance in a general domain,
/// with the provenance of each side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicBound {
    pub lo: f64,
    pub hi: f64,
    pub lo_method: LoMethod,
    pub hi_method: HiMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoMethod {
    KoebeDensity,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HiMethod {
    DiskInclusion,
    Exact,
}

impl HyperbolicBound {
    pub fn exact(v: f64) -> Self {
        Self {
            lo: v,
            hi: v,
            lo_method: LoMethod::Exact,
            hi_method: HiMethod::Exact,
        }
    }
}

/// Upper bound `2 arctanh(|z1 - z2| / r)` from the inclusion
/// `D(z2, r)` inside the domain, verified by sampling `boundary_samples`
/// points of the circle against `domain_check`.
pub fn rho_upper_by_disk_inclusion(
    z1: Complex64,
    z2: Complex64,
    r: f64,
    domain_check: impl Fn(Complex64) -> bool,
    boundary_samples: usize,
) -> Result<f64, MetricError> {
    for j in 0..boundary_samples {
        let angle = 2.0 * PI * j as f64 / boundary_samples as f64;
        let w = z2 + Complex64::from_polar(r, angle);
        if !domain_check(w) {
            return Err(MetricError::InclusionFailed(w));
        }
    }
    let sep = (z1 - z2).norm();
    if sep >= r {
        return Err(MetricError::PointsTooFar);
    }
    Ok(2.0 * (sep / r).atanh())
}

/// Integral of the Koebe density floor `1 / (2 dist)` along a polyline.
///
/// This certifies a lower bound for the hyperbolic length of *this* path;
/// it bounds the distance from below only when minimized over all paths,
/// which is what `channel_lower_bound` does for channel geometries.
pub fn rho_lower_by_koebe(
    path: &[Complex64],
    boundary_dist: impl Fn(Complex64) -> f64,
    subdivisions: usize,
) -> Result<f64, MetricError> {
    let mut total = 0.0;
    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let len = (b - a).norm();
        if len == 0.0 {
            continue;
        }
        let n = subdivisions.max(1);
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            let z = a + t * (b - a);
            let d = boundary_dist(z);
            if !(d > 0.0) {
                return Err(MetricError::PathExitsDomain(z));
            }
            if d.is_finite() {
                total += len / n as f64 / (2.0 * d);
            }
        }
    }
    Ok(total)
}

/// Horizontal channel between two walls: any path from a point with
/// `Re z = re_start` deep in the channel to a point above it must traverse
/// the channel up to `x2`, where the density is at least `1 / (pi - y1)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChannelSpec {
    /// Height of the lower wall (conservative default `-4 pi`).
    pub y1: f64,
    /// Abscissa where the channel constraint stops (default: the surgery
    /// abscissa `x1`).
    pub x2: f64,
}

impl ChannelSpec {
    pub fn defaults_for(p: &ConstructionParams) -> Self {
        Self {
            y1: -4.0 * PI,
            x2: p.x1,
        }
    }

    /// `(x2 - re_start) / (pi - y1)`, the certified channel lower bound for
    /// the hyperbolic distance from the channel point to anything beyond
    /// `x2`. Zero when the start is not inside the channel run.
    pub fn lower_bound(&self, re_start: f64) -> f64 {
        ((self.x2 - re_start) / (PI - self.y1)).max(0.0)
    }
}

/// Estimate of the distance by minimizing the Koebe-floor integral over a
/// small family of polyline candidates (straight segment plus dog-legs
/// through the given waypoints). An estimate, not a certificate.
pub fn rho_lower_via_paths(
    from: Complex64,
    to: Complex64,
    boundary_dist: impl Fn(Complex64) -> f64 + Copy,
    waypoints: &[Complex64],
    subdivisions: usize,
) -> Result<f64, MetricError> {
    let mut best = rho_lower_by_koebe(&[from, to], boundary_dist, subdivisions)?;
    for &w in waypoints {
        let v = rho_lower_by_koebe(&[from, w, to], boundary_dist, subdivisions)?;
        best = best.min(v);
    }
    Ok(best)
}

/// Report for the three-point estimate: `w1` below the strip, its image
/// `w2`, and the second image `w3`, with the disk-inclusion upper bound for
/// `rho(w2, w3)` and the channel lower bound for `rho(w1, w2)`.
#[derive(Debug, Clone, Serialize)]
pub struct WTripleReport {
    pub x: f64,
    pub w1: [f64; 2],
    pub w2: [f64; 2],
    pub w3: [f64; 2],
    pub r1: f64,
    pub r2: f64,
    pub separation23: f64,
    pub w2_in_disk: bool,
    pub disk_in_w0: bool,
    pub in_disk: bool,
    pub upper23: f64,
    pub lower12: f64,
    pub channel: ChannelSpec,
}

/// Runs the two-sided metric skeleton at abscissa `x`: `w1 = -x - 2 pi i`,
/// `w2 = F(w1)`, `w3 = F(w2)`, radii `r1 = 2 pi (alpha + m) + delta` and
/// `r2 = 2 pi (2 alpha + 2m - 3) - delta`.
pub fn verify_w_triple(
    p: &ConstructionParams,
    x: f64,
    delta: f64,
    channel: ChannelSpec,
    boundary_samples: usize,
) -> Result<WTripleReport, MetricError> {
    let w1 = Complex64::new(-x, -2.0 * PI);
    let w2 = checked(eval_f(w1, p))?;
    let w3 = checked(eval_f(w2, p))?;
    let r1 = 2.0 * PI * (p.alpha + p.m as f64) + delta;
    let r2 = 2.0 * PI * (2.0 * p.alpha + 2.0 * p.m as f64 - 3.0) - delta;
    let sep = (w2 - w3).norm();
    let w2_in_disk = sep < r1;
    let in_w0 = |z: Complex64| z.re < p.x0 && z.im > 2.0 * PI;
    let mut disk_in_w0 = true;
    for j in 0..boundary_samples {
        let angle = 2.0 * PI * j as f64 / boundary_samples as f64;
        if !in_w0(w3 + Complex64::from_polar(r2, angle)) {
            disk_in_w0 = false;
            break;
        }
    }
    let upper23 = 2.0 * (r1 / r2).atanh();
    let lower12 = channel.lower_bound(w1.re);
    Ok(WTripleReport {
        x,
        w1: [w1.re, w1.im],
        w2: [w2.re, w2.im],
        w3: [w3.re, w3.im],
        r1,
        r2,
        separation23: sep,
        w2_in_disk,
        disk_in_w0,
        in_disk: w2_in_disk && disk_in_w0,
        upper23,
        lower12,
        channel,
    })
}

fn checked(v: EvalResult) -> Result<Complex64, MetricError> {
    v.map_err(|_| MetricError::MapOverflow)
}

/// Certified interval for the hyperbolic length of one orbit step
/// `w -> w_next`, from boundary-distance estimates at the endpoints.
///
/// Lower side: the density floor `1/(2 dist)` with the 1-Lipschitz growth
/// `dist <= d(w) + t` gives `ln(1 + s/d)/2`. Upper side: the density
/// ceiling `2/dist`; within the disk `D(w, d)` the sharper disk-inclusion
/// value `2 arctanh(s/d)` applies, otherwise the segment is integrated
/// against the Lipschitz cone from both endpoints (infinite if the cones
/// do not cover the segment).
pub fn step_bound_interval(w: Complex64, w_next: Complex64, d_w: f64, d_next: f64) -> HyperbolicBound {
    let s = (w_next - w).norm();
    if s == 0.0 {
        return HyperbolicBound {
            lo: 0.0,
            hi: 0.0,
            lo_method: LoMethod::KoebeDensity,
            hi_method: HiMethod::DiskInclusion,
        };
    }
    let lo = 0.5 * (s / d_w).ln_1p();
    let hi = if s < d_w {
        2.0 * (s / d_w).atanh()
    } else {
        // Integrate 2 / max(d_w - t, d_next - (s - t)) over the segment.
        let n = 256;
        let mut acc: f64 = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64 * s;
            let floor = (d_w - t).max(d_next - (s - t));
            if floor <= 0.0 {
                acc = f64::INFINITY;
                break;
            }
            acc += 2.0 * s / n as f64 / floor;
        }
        acc
    };
    HyperbolicBound {
        lo,
        hi,
        lo_method: LoMethod::KoebeDensity,
        hi_method: HiMethod::DiskInclusion,
    }
}

/// Checks that the hyperbolic step sequence of an orbit inside an exact
/// model domain is non-increasing (within `1e-9` slack).
pub fn schwarz_pick_step_monotonicity(
    f: impl Fn(Complex64) -> EvalResult,
    model: ModelDomain,
    z0: Complex64,
    n: usize,
) -> Result<bool, MetricError> {
    if !model.contains(z0) {
        return Err(MetricError::OutsideDomain(z0));
    }
    let mut w = z0;
    let mut prev_step: Option<f64> = None;
    for i in 0..n {
        let w_next = f(w).map_err(|_| MetricError::MapOverflow)?;
        if !model.contains(w_next) {
            return Err(MetricError::OrbitLeftDomain(i));
        }
        let step = model.rho(w, w_next)?;
        if let Some(prev) = prev_step {
            if step > prev + 1e-9 {
                return Ok(false);
            }
        }
        prev_step = Some(step);
        w = w_next;
    }
    Ok(true)
}
