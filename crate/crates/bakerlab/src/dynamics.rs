//! Orbit iteration, escape detection, growth and crossing checks,
//! boundary-distance estimation, and Baker-domain classification through the
//! König ratio `|w_{n+1} - w_n| / dist(w_n, dU)`.

use crate::hypmetric::{step_bound_interval, HyperbolicBound};
use crate::maps::{eval_f, region_of, EvalResult, MapKind};
use crate::params::{ConstructionParams, Family};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Why an orbit stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    MaxIter,
    Escaped,
    Overflow,
}

/// Escape signature: which coordinate must grow monotonically, and the
/// threshold it must clear. A plain modulus blowup is a fallback escape in
/// every mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapePolicy {
    pub kind: EscapeKind,
    pub threshold: f64,
    pub consecutive: usize,
    pub modulus_fallback: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EscapeKind {
    /// Escape upward: `Im w` beyond the threshold after consecutive growth.
    ImUp,
    /// Escape rightward: `Re w` beyond the threshold.
    ReUp,
    /// Escape leftward: `Re w` below minus the threshold.
    ReDown,
}

impl EscapePolicy {
    pub fn new(kind: EscapeKind) -> Self {
        Self {
            kind,
            threshold: 50.0,
            consecutive: 3,
            modulus_fallback: 1e8,
        }
    }

    /// Escape signature appropriate for each map family: upward drift for
    /// the family-1 maps, rightward drift for Fatou's example, leftward
    /// collapse for the family-2 maps. The Siegel models never escape in a
    /// directed sense; they get the modulus fallback only.
    pub fn default_for(map: MapKind) -> Self {
        match map {
            MapKind::Fatou => Self::new(EscapeKind::ReUp),
            MapKind::H1 | MapKind::K1 | MapKind::F1 => Self::new(EscapeKind::ImUp),
            MapKind::H2 | MapKind::K2 | MapKind::F2 => Self::new(EscapeKind::ReDown),
            MapKind::G1 | MapKind::G2 => Self {
                kind: EscapeKind::ReUp,
                threshold: f64::INFINITY,
                consecutive: usize::MAX,
                modulus_fallback: 1e8,
            },
        }
    }

    /// The monotone coordinate of the signature.
    #[inline]
    pub fn measure(&self, w: Complex64) -> f64 {
        match self.kind {
            EscapeKind::ImUp => w.im,
            EscapeKind::ReUp => w.re,
            EscapeKind::ReDown => -w.re,
        }
    }

    /// The directed escape criterion: past the threshold after enough
    /// consecutive growth.
    #[inline]
    pub fn directed(&self, w: Complex64, streak: usize) -> bool {
        self.measure(w) > self.threshold && streak >= self.consecutive
    }

    /// Directedness at a blowup (value overflow or modulus beyond the
    /// fallback): the streak requirement is capped by the steps the orbit
    /// actually had, so a fresh seed that grew at every step before leaving
    /// the representable range still counts as escaping. An undirected
    /// blowup is orbit termination, not escape.
    #[inline]
    pub fn directed_at_blowup(&self, w: Complex64, streak: usize, steps_taken: usize) -> bool {
        self.measure(w) > self.threshold && streak >= self.consecutive.min(steps_taken)
    }
}

/// One computed orbit. `steps[n] = |w_{n+1} - w_n|`; `dists` and `ratios`
/// are NaN where not computed (they are filled by `annotate_distances`).
#[derive(Debug, Clone, Serialize)]
pub struct OrbitRecord {
    pub points: Vec<[f64; 2]>,
    pub steps: Vec<f64>,
    pub dists: Vec<f64>,
    pub ratios: Vec<f64>,
    pub terminated: Termination,
}

impl OrbitRecord {
    pub fn point(&self, n: usize) -> Complex64 {
        Complex64::new(self.points[n][0], self.points[n][1])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Iterates `f` from `z0` until `n_max` points are accumulated, the escape
/// policy fires, or the evaluation overflows. Overflow in the escape
/// direction counts as escape, otherwise as orbit termination.
pub fn iterate(
    f: impl Fn(Complex64) -> EvalResult,
    z0: Complex64,
    n_max: usize,
    policy: &EscapePolicy,
) -> OrbitRecord {
    let mut points = vec![[z0.re, z0.im]];
    let mut steps = Vec::new();
    let mut w = z0;
    let mut streak = 0usize;
    let mut terminated = Termination::MaxIter;
    while points.len() < n_max + 1 {
        let next = match f(w) {
            Ok(v) if v.re.is_finite() && v.im.is_finite() => v,
            _ => {
                terminated = if policy.directed_at_blowup(w, streak, steps.len()) {
                    Termination::Escaped
                } else {
                    Termination::Overflow
                };
                break;
            }
        };
        steps.push((next - w).norm());
        points.push([next.re, next.im]);
        if policy.measure(next) > policy.measure(w) {
            streak += 1;
        } else {
            streak = 0;
        }
        w = next;
        if policy.directed(w, streak) {
            terminated = Termination::Escaped;
            break;
        }
        if w.norm() > policy.modulus_fallback {
            terminated = if policy.directed_at_blowup(w, streak, steps.len()) {
                Termination::Escaped
            } else {
                Termination::Overflow
            };
            break;
        }
    }
    let n = points.len();
    OrbitRecord {
        points,
        steps,
        dists: vec![f64::NAN; n],
        ratios: vec![f64::NAN; n],
        terminated,
    }
}

/// Whether the orbit of `z0` escapes under the policy within `n_max` steps.
pub fn escapes(
    f: impl Fn(Complex64) -> EvalResult,
    z0: Complex64,
    n_max: usize,
    policy: &EscapePolicy,
) -> bool {
    iterate(&f, z0, n_max, policy).terminated == Termination::Escaped
}

/// Distance from `w` to the membership boundary, as the minimum over
/// `directions` rays of the radius where `member` flips from true to false.
/// Along each ray the first flip is bracketed by an outward march and then
/// bisected. Returns `r_max` when no ray flips.
pub fn boundary_distance_by_rays(
    member: impl Fn(Complex64) -> bool,
    w: Complex64,
    directions: usize,
    r_max: f64,
) -> f64 {
    let march = 24usize;
    let mut best = r_max;
    for j in 0..directions {
        let angle = 2.0 * PI * j as f64 / directions as f64;
        let dir = Complex64::from_polar(1.0, angle);
        // Outward march to bracket the first flip. A ray is abandoned only
        // once membership is confirmed out to the current best radius.
        let mut lo = 0.0f64;
        let mut hi = None;
        for i in 1..=march {
            let r = r_max * i as f64 / march as f64;
            if member(w + r * dir) {
                lo = r;
                if r >= best {
                    break;
                }
            } else {
                hi = Some(r);
                break;
            }
        }
        let Some(mut hi) = hi else { continue };
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if member(w + mid * dir) {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-9 * (1.0 + hi) {
                break;
            }
        }
        best = best.min(0.5 * (lo + hi));
    }
    best
}

/// Boundary distance where membership means "escapes under the policy".
pub fn estimate_boundary_distance(
    f: impl Fn(Complex64) -> EvalResult,
    w: Complex64,
    policy: &EscapePolicy,
    directions: usize,
    r_max: f64,
    membership_n_max: usize,
) -> f64 {
    boundary_distance_by_rays(
        |z| escapes(&f, z, membership_n_max, policy),
        w,
        directions,
        r_max,
    )
}

/// Options for filling the `dists`/`ratios` columns of an orbit.
#[derive(Debug, Clone, Copy)]
pub struct DistanceOptions {
    pub directions: usize,
    pub membership_n_max: usize,
    /// Estimate the distance at every `stride`-th point before the tail.
    pub stride: usize,
    /// Fraction of the orbit (from the end) annotated densely.
    pub tail_fraction: f64,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            directions: 32,
            membership_n_max: 200,
            stride: 8,
            tail_fraction: 0.25,
        }
    }
}

/// Fills boundary distances and König ratios. The ray cap follows the
/// previous estimate (`r_max = 10 * previous distance`), bootstrapped from
/// the seed modulus and floored at the point's own modulus so that orbits
/// that grow faster than the cap (e.g. doubling maps) are not saturated.
pub fn annotate_distances(
    orbit: &mut OrbitRecord,
    f: impl Fn(Complex64) -> EvalResult + Sync,
    policy: &EscapePolicy,
    opts: &DistanceOptions,
) {
    let n = orbit.len();
    if n == 0 {
        return;
    }
    let tail_start = ((n as f64) * (1.0 - opts.tail_fraction)).floor() as usize;
    let mut prev_d = 1.0 + orbit.point(0).norm();
    for i in 0..n {
        let annotate = i >= tail_start || i % opts.stride == 0;
        if !annotate {
            continue;
        }
        let w = orbit.point(i);
        let d = estimate_boundary_distance(
            &f,
            w,
            policy,
            opts.directions,
            (10.0 * prev_d).max(w.norm() + 10.0),
            opts.membership_n_max,
        );
        orbit.dists[i] = d;
        if d > 0.0 && i < orbit.steps.len() {
            orbit.ratios[i] = orbit.steps[i] / d;
        }
        prev_d = d.max(1e-12);
    }
}

/// Number of orbit points inside the interpolation zones (where the glued
/// map is not analytic).
pub fn count_strip_crossings(orbit: &OrbitRecord, p: &ConstructionParams) -> usize {
    (0..orbit.len())
        .filter(|&i| region_of(orbit.point(i), p).is_interpolation())
        .count()
}

/// Growth-inequality report over the closed surgery strip minus the core.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub pass: bool,
    pub min_margin: f64,
    pub samples: usize,
    pub worst: [f64; 2],
    pub family: Family,
}

/// Samples the closed interpolation zones and checks the forward-step
/// inequalities.
///
/// Family 1: `Im F(z) > Im z + 2 pi (alpha + m) - 1`, `Im F(z) > 3 pi`, and
/// `Re F(z) < x0`. Family 2 (the rotated analogue): the image clears the
/// strip to the left, `Re F(z) < -2 pi M - 2 pi` and `Re F(z) < Re z`.
/// The margin is the minimum slack over all samples and clauses.
pub fn check_growth_inequality(
    p: &ConstructionParams,
    sample_count: usize,
    span: f64,
    rng: &mut ChaCha8Rng,
) -> GrowthReport {
    let mut min_margin = f64::INFINITY;
    let mut worst = Complex64::new(0.0, 0.0);
    let mut samples = 0usize;
    while samples < sample_count {
        let z = sample_interpolation_zone(p, span, rng);
        let margin = match eval_f(z, p) {
            Ok(fz) => match p.family {
                Family::Theorem1 => {
                    let a = fz.im - z.im - 2.0 * PI * (p.alpha + p.m as f64) + 1.0;
                    let b = fz.im - 3.0 * PI;
                    let c = p.x0 - fz.re;
                    a.min(b).min(c)
                }
                Family::Theorem2 => {
                    let wall = -2.0 * PI * (p.strip_index as f64) - 2.0 * PI;
                    let a = wall - fz.re;
                    let b = z.re - fz.re;
                    a.min(b)
                }
            },
            Err(_) => f64::NEG_INFINITY,
        };
        if margin < min_margin {
            min_margin = margin;
            worst = z;
        }
        samples += 1;
    }
    GrowthReport {
        pass: min_margin > 0.0,
        min_margin,
        samples,
        worst: [worst.re, worst.im],
        family: p.family,
    }
}

/// Uniform-ish sample over the closed interpolation zones, area-weighted
/// between the two rectangles (truncated at depth `span`) and the cap.
pub fn sample_interpolation_zone(
    p: &ConstructionParams,
    span: f64,
    rng: &mut ChaCha8Rng,
) -> Complex64 {
    let rect_area = span * PI;
    let cap_area = 0.5 * PI * (4.0 * PI * PI - PI * PI);
    let total = 2.0 * rect_area + cap_area;
    let pick = rng.gen_range(0.0..total);
    match p.family {
        Family::Theorem1 => {
            if pick < rect_area {
                let x = p.x1 - rng.gen_range(0.0..span);
                let y = rng.gen_range(PI..2.0 * PI);
                Complex64::new(x, y)
            } else if pick < 2.0 * rect_area {
                let x = p.x1 - rng.gen_range(0.0..span);
                let y = -rng.gen_range(PI..2.0 * PI);
                Complex64::new(x, y)
            } else {
                // Area-uniform in the half-annulus.
                let r = (rng.gen_range((PI * PI)..(4.0 * PI * PI))).sqrt();
                let phi = rng.gen_range(-PI / 2.0..PI / 2.0);
                p.x1 + Complex64::from_polar(r, phi)
            }
        }
        Family::Theorem2 => {
            let c0 = p.strip_center();
            if pick < rect_area {
                let u = -rng.gen_range(PI..2.0 * PI);
                let v = -2.0 * PI - rng.gen_range(0.0..span);
                Complex64::new(c0.re + u, v)
            } else if pick < 2.0 * rect_area {
                let u = rng.gen_range(PI..2.0 * PI);
                let v = -2.0 * PI - rng.gen_range(0.0..span);
                Complex64::new(c0.re + u, v)
            } else {
                let r = (rng.gen_range((PI * PI)..(4.0 * PI * PI))).sqrt();
                let phi = rng.gen_range(0.0..PI);
                c0 + Complex64::from_polar(r, phi)
            }
        }
    }
}

/// Baker-domain type verdict with the evidence behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Hyperbolic,
    SimplyParabolic,
    DoublyParabolic,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Hyperbolic => "hyperbolic",
            Verdict::SimplyParabolic => "simply_parabolic",
            Verdict::DoublyParabolic => "doubly_parabolic",
            Verdict::Inconclusive => "inconclusive",
        };
        write!(f, "{s}")
    }
}

/// Thresholds of the classification decision rule. Desk-scale stand-ins for
/// the limits in the ratio criteria; all config-exposed.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClassifyThresholds {
    /// Ratio size below which a tail counts as vanishing.
    pub eps: f64,
    /// Fraction of the orbit forming the tail window.
    pub tail_fraction: f64,
    /// Uniform floor certifying a hyperbolic verdict.
    pub beta_floor: f64,
    /// Steps ignored at the start when certifying the uniform floor.
    pub beta_min_n: usize,
    /// Tails must shrink by at least this factor across the seed ladder
    /// for the seed-dependent-decay (simply parabolic) verdict.
    pub trend_factor: f64,
    /// Per-orbit decay factor: tail below this multiple of the early
    /// window means the ratio vanishes along the orbit.
    pub orbit_decay_factor: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        Self {
            eps: 0.05,
            tail_fraction: 0.25,
            beta_floor: 0.2,
            beta_min_n: 5,
            trend_factor: 0.5,
            orbit_decay_factor: 0.5,
        }
    }
}

/// Evidence collected for one seed.
#[derive(Debug, Clone, Serialize)]
pub struct SeedEvidence {
    pub seed: [f64; 2],
    pub terminated: Termination,
    pub orbit_len: usize,
    /// Median König ratio over the tail window.
    pub tail_ratio: f64,
    /// Median König ratio over the first quarter (after warmup).
    pub early_ratio: f64,
    /// Minimum ratio over all annotated steps past the warmup.
    pub min_ratio: f64,
    /// The annotated tail ratios themselves.
    pub ratio_tail: Vec<f64>,
    /// Certified hyperbolic-step intervals `[lo, hi]` on tail steps.
    pub step_bounds: Vec<HyperbolicBound>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationVerdict {
    pub verdict: Verdict,
    pub thresholds: ClassifyThresholds,
    pub seeds: Vec<SeedEvidence>,
    pub notes: Vec<String>,
}

/// Classifies the invariant escaping component by the behavior of the
/// König ratio across a seed ladder.
///
/// Decision rule (desk-scale proxies for the ratio criteria):
/// all tails below `eps` means the ratio vanishes everywhere (doubly
/// parabolic); a uniform floor `beta_floor` across seeds and steps means
/// hyperbolic; per-seed tails that stay positive and stable in `n` but
/// shrink along the seed ladder mean the infimum over seeds vanishes
/// (simply parabolic); anything else is inconclusive.
pub fn koenig_classify(
    f: impl Fn(Complex64) -> EvalResult + Sync,
    membership_policy: &EscapePolicy,
    seeds: &[Complex64],
    n_max: usize,
    thresholds: &ClassifyThresholds,
) -> ClassificationVerdict {
    // The seed orbits must live long enough to expose their ratio tails, so
    // the directed threshold is lifted for them; the membership oracle used
    // in the distance estimates keeps the quick-firing policy.
    let orbit_policy = EscapePolicy {
        threshold: f64::INFINITY,
        ..*membership_policy
    };
    let opts = DistanceOptions {
        tail_fraction: thresholds.tail_fraction,
        ..DistanceOptions::default()
    };
    let evidence: Vec<SeedEvidence> = seeds
        .par_iter()
        .map(|&seed| {
            let mut orbit = iterate(&f, seed, n_max, &orbit_policy);
            annotate_distances(&mut orbit, &f, membership_policy, &opts);
            let n = orbit.len();
            let tail_start = ((n as f64) * (1.0 - thresholds.tail_fraction)).floor() as usize;
            let ratios_at = |lo: usize, hi: usize| -> Vec<f64> {
                (lo..hi.min(orbit.ratios.len()))
                    .map(|i| orbit.ratios[i])
                    .filter(|r| r.is_finite())
                    .collect()
            };
            let tail: Vec<f64> = ratios_at(tail_start, n);
            let early: Vec<f64> = ratios_at(thresholds.beta_min_n, tail_start.max(n / 4));
            let all: Vec<f64> = ratios_at(thresholds.beta_min_n, n);
            let mut step_bounds = Vec::new();
            for i in tail_start..n.saturating_sub(1) {
                if orbit.dists[i].is_finite() && orbit.dists[i + 1].is_finite() {
                    step_bounds.push(step_bound_interval(
                        orbit.point(i),
                        orbit.point(i + 1),
                        orbit.dists[i],
                        orbit.dists[i + 1],
                    ));
                }
            }
            SeedEvidence {
                seed: [seed.re, seed.im],
                terminated: orbit.terminated,
                orbit_len: n,
                tail_ratio: median(&tail),
                early_ratio: median(&early),
                min_ratio: all.iter().copied().fold(f64::INFINITY, f64::min),
                ratio_tail: tail,
                step_bounds,
            }
        })
        .collect();

    let mut notes = Vec::new();
    let usable: Vec<&SeedEvidence> = evidence
        .iter()
        .filter(|e| e.tail_ratio.is_finite() && !e.ratio_tail.is_empty())
        .collect();
    let verdict = if usable.len() < evidence.len().max(4) / 2 {
        notes.push("too few orbits with usable tails".to_string());
        Verdict::Inconclusive
    } else {
        let tails: Vec<f64> = usable.iter().map(|e| e.tail_ratio).collect();
        let max_tail = tails.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min_tail = tails.iter().copied().fold(f64::INFINITY, f64::min);
        let min_floor = usable
            .iter()
            .map(|e| e.min_ratio)
            .fold(f64::INFINITY, f64::min);
        // Per-orbit decay: the tail sits well below the early window.
        let orbit_decay = usable.iter().all(|e| {
            e.early_ratio.is_finite()
                && e.tail_ratio < thresholds.orbit_decay_factor * e.early_ratio
        });
        // Seed-ladder trend: tails shrink substantially across seeds.
        let ladder_trend = min_tail < thresholds.trend_factor * max_tail;
        if max_tail < thresholds.eps {
            notes.push(format!("all tail ratios below eps = {}", thresholds.eps));
            Verdict::DoublyParabolic
        } else if min_floor >= thresholds.beta_floor && !ladder_trend && !orbit_decay {
            notes.push(format!(
                "uniform ratio floor {min_floor:.4} >= beta = {}",
                thresholds.beta_floor
            ));
            Verdict::Hyperbolic
        } else if min_tail > 0.0 && !orbit_decay && ladder_trend {
            notes.push(format!(
                "per-seed tails stable but shrink across the ladder \
                 ({max_tail:.4} down to {min_tail:.4})"
            ));
            Verdict::SimplyParabolic
        } else {
            notes.push("ratio data matches no criterion cleanly".to_string());
            Verdict::Inconclusive
        }
    };
    ClassificationVerdict {
        verdict,
        thresholds: *thresholds,
        seeds: evidence,
        notes,
    }
}

fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Scan result for the largest circle on which the Siegel-model orbits stay
/// inside the unit disk.
#[derive(Debug, Clone, Serialize)]
pub struct SiegelScan {
    pub r0: f64,
    /// True when halving the iteration budget moves the estimate by more
    /// than 20 percent: the boundary is still drifting, as for rational
    /// rotation numbers.
    pub unstable: bool,
    pub n_iter: usize,
}

/// Largest sampled radius whose circle of seeds stays in the unit disk for
/// `n_iter` steps of the Siegel model; 0.0 when even tiny circles leave.
pub fn siegel_scan(p: &ConstructionParams, n_iter: usize, radial_grid: usize) -> SiegelScan {
    let survives = |r: f64, n: usize| -> bool {
        let angles = 64;
        for j in 0..angles {
            let mut w = Complex64::from_polar(r, 2.0 * PI * j as f64 / angles as f64);
            for _ in 0..n {
                match crate::maps::eval_g1(w, p) {
                    Ok(v) => w = v,
                    Err(_) => return false,
                }
                if w.norm() >= 1.0 {
                    return false;
                }
            }
        }
        true
    };
    let largest = |n: usize| -> f64 {
        let mut best = 0.0;
        for i in 1..=radial_grid {
            let r = 0.99 * i as f64 / radial_grid as f64;
            if survives(r, n) {
                best = r;
            }
        }
        best
    };
    let full = largest(n_iter);
    let quarter = largest(n_iter / 4);
    let unstable = full == 0.0 || (quarter - full).abs() > 0.2 * quarter.max(1e-12);
    SiegelScan {
        r0: full,
        unstable,
        n_iter,
    }
}
