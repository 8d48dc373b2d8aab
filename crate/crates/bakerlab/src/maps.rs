//! Closed-form evaluation of the surgery maps, their regions, and the glued
//! piecewise map `F` of each family.
//!
//! Family 1 glues `h(z) = 2*pi*i*(alpha+m) + z + e^z` (outside the strip) to
//! `k(z) = 2*pi*i*(alpha+m) + z + exp(e^{-z} - L)` (core strip `T`), with
//! affine interpolation on the flanking rectangles `A`, `ABAR` and on the
//! half-annulus cap `B`. Family 2 glues `h(z) = 2 - log 2 + 2z - e^z` to
//! `k(z) = 2 - log 2 + 2z + exp(e^{-iz} - L)` across a vertical strip by the
//! same pattern, rotated.

use crate::params::{ConstructionParams, Family};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Ceiling on the real part of any exponent argument. Beyond this, `exp`
/// leaves f64 range and evaluation reports overflow instead of returning
/// non-finite values.
pub const EXP_ARG_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("exponent argument left the representable range")]
pub struct Overflow;

pub type EvalResult = Result<Complex64, Overflow>;

#[inline]
fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `exp` with the overflow guard on the real part of the argument.
#[inline]
pub fn cexp(w: Complex64) -> EvalResult {
    if w.re > EXP_ARG_LIMIT || !w.re.is_finite() {
        Err(Overflow)
    } else {
        Ok(w.exp())
    }
}

/// Translation constant of family 1: `2*pi*i*(alpha + m)`.
#[inline]
pub fn translation1(p: &ConstructionParams) -> Complex64 {
    c(0.0, 2.0 * PI * (p.alpha + p.m as f64))
}

/// Additive constant of family 2: `2 - log 2`.
#[inline]
pub fn translation2() -> f64 {
    2.0 - std::f64::consts::LN_2
}

/// `h(z) = 2*pi*i*(alpha+m) + z + e^z`.
pub fn eval_h1(z: Complex64, p: &ConstructionParams) -> EvalResult {
    Ok(translation1(p) + z + cexp(z)?)
}

/// `k(z) = 2*pi*i*(alpha+m) + z + exp(e^{-z} - L)`; the inner exponent
/// `e^{-z}` is formed first, then the damped outer exponential.
pub fn eval_k1(z: Complex64, p: &ConstructionParams) -> EvalResult {
    let inner = cexp(-z)?;
    Ok(translation1(p) + z + cexp(inner - p.damping)?)
}

/// Siegel-disk model `g(z) = e^{2*pi*i*alpha} z e^z`.
pub fn eval_g1(z: Complex64, p: &ConstructionParams) -> EvalResult {
    let rot = Complex64::from_polar(1.0, 2.0 * PI * p.alpha);
    Ok(rot * z * cexp(z)?)
}

/// `h(z) = 2 - log 2 + 2z - e^z`.
pub fn eval_h2(z: Complex64) -> EvalResult {
    Ok(translation2() + 2.0 * z - cexp(z)?)
}

/// `k(z) = 2 - log 2 + 2z + exp(e^{-iz} - L)`.
pub fn eval_k2(z: Complex64, p: &ConstructionParams) -> EvalResult {
    let inner = cexp(-Complex64::i() * z)?;
    Ok(translation2() + 2.0 * z + cexp(inner - p.damping)?)
}

/// Superattracting model `g(z) = z^2 e^{2-z} / 2`.
pub fn eval_g2(z: Complex64) -> EvalResult {
    Ok(0.5 * z * z * cexp(2.0 - z)?)
}

/// Fatou's example `f(z) = z + 1 + e^{-z}`.
pub fn eval_fatou(z: Complex64) -> EvalResult {
    Ok(z + 1.0 + cexp(-z)?)
}

/// Piece of the plane a point belongs to, for fixed parameters.
///
/// `T` is the core strip carrying `k`; `A`/`Abar` are the two rectangular
/// interpolation strips flanking it; `B` is family 1's half-annulus cap and
/// `Cap` its family 2 analogue; `Outside` is the complement of the closed
/// surgery strip, carrying `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionTag {
    Outside,
    T,
    A,
    Abar,
    B,
    Cap,
}

impl RegionTag {
    /// True on the interpolation zones, where the glued map is not analytic.
    pub fn is_interpolation(self) -> bool {
        matches!(self, RegionTag::A | RegionTag::Abar | RegionTag::B | RegionTag::Cap)
    }
}

/// Region membership. Boundary points go to the closed sets in definition
/// order: the core strip first, then the interpolation zones, then outside.
pub fn region_of(z: Complex64, p: &ConstructionParams) -> RegionTag {
    match p.family {
        Family::Theorem1 => region_of_t1(z, p),
        Family::Theorem2 => region_of_t2(z, p),
    }
}

fn region_of_t1(z: Complex64, p: &ConstructionParams) -> RegionTag {
    let x1 = p.x1;
    let d = (z - x1).norm();
    if (z.re <= x1 && z.im.abs() <= PI) || d <= PI {
        return RegionTag::T;
    }
    if z.re <= x1 && (PI..=2.0 * PI).contains(&z.im) {
        return RegionTag::A;
    }
    if z.re <= x1 && (-2.0 * PI..=-PI).contains(&z.im) {
        return RegionTag::Abar;
    }
    if z.re >= x1 && (PI..=2.0 * PI).contains(&d) {
        return RegionTag::B;
    }
    RegionTag::Outside
}

fn region_of_t2(z: Complex64, p: &ConstructionParams) -> RegionTag {
    let c0 = p.strip_center();
    let u = z.re - c0.re;
    let d = (z - c0).norm();
    if (u.abs() <= PI && z.im <= -2.0 * PI) || d <= PI {
        return RegionTag::T;
    }
    if z.im <= -2.0 * PI && (-2.0 * PI..=-PI).contains(&u) {
        return RegionTag::A;
    }
    if z.im <= -2.0 * PI && (PI..=2.0 * PI).contains(&u) {
        return RegionTag::Abar;
    }
    if z.im >= -2.0 * PI && (PI..=2.0 * PI).contains(&d) {
        return RegionTag::Cap;
    }
    RegionTag::Outside
}

/// The glued piecewise map `F`.
pub fn eval_f(z: Complex64, p: &ConstructionParams) -> EvalResult {
    eval_f_piece(z, p, region_of(z, p))
}

/// The closed form attached to `tag`, evaluated at `z`. At seam points this
/// is the one-sided value of that piece, which continuity tests compare
/// across adjacent pieces.
pub fn eval_f_piece(z: Complex64, p: &ConstructionParams, tag: RegionTag) -> EvalResult {
    match p.family {
        Family::Theorem1 => eval_f1(z, p, tag),
        Family::Theorem2 => eval_f2(z, p, tag),
    }
}

/// Inner-arc anchor for the half-annulus cap of family 1: the translation
/// plus the damped perturbation `exp(-e^w - L)`. This is the closed form
/// whose Wirtinger derivatives the annular-zone bound check controls; the
/// raw strip map's perturbation `exp(e^{-w} - L)` grows double-exponentially
/// toward the right edge of the inner arc and is not representable there.
fn cap_anchor1(w: Complex64, p: &ConstructionParams) -> EvalResult {
    let inner = cexp(w)?;
    Ok(translation1(p) + w + cexp(-inner - p.damping)?)
}

fn eval_f1(z: Complex64, p: &ConstructionParams, tag: RegionTag) -> EvalResult {
    let x1 = p.x1;
    match tag {
        RegionTag::Outside => eval_h1(z, p),
        RegionTag::T => eval_k1(z, p),
        RegionTag::A => {
            let s = (z.im - PI) / PI;
            let outer = eval_h1(c(z.re, 2.0 * PI), p)?;
            let inner = eval_k1(c(z.re, PI), p)?;
            Ok(s * outer + (1.0 - s) * inner)
        }
        RegionTag::Abar => {
            let s = (-z.im - PI) / PI;
            let outer = eval_h1(c(z.re, -2.0 * PI), p)?;
            let inner = eval_k1(c(z.re, -PI), p)?;
            Ok(s * outer + (1.0 - s) * inner)
        }
        RegionTag::B => {
            let zeta = z - x1;
            let r = zeta.norm();
            let dir = zeta / r;
            let s = (r - PI) / PI;
            let outer = eval_h1(x1 + 2.0 * PI * dir, p)?;
            let inner = cap_anchor1(x1 + PI * dir, p)?;
            Ok(s * outer + (1.0 - s) * inner)
        }
        RegionTag::Cap => unreachable!("family 1 has no Cap region"),
    }
}

fn eval_f2(z: Complex64, p: &ConstructionParams, tag: RegionTag) -> EvalResult {
    let c0 = p.strip_center();
    match tag {
        RegionTag::Outside => eval_h2(z),
        RegionTag::T => eval_k2(z, p),
        RegionTag::A => {
            let u = z.re - c0.re;
            let s = (-u - PI) / PI;
            let outer = eval_h2(c(c0.re - 2.0 * PI, z.im))?;
            let inner = eval_k2(c(c0.re - PI, z.im), p)?;
            Ok(s * outer + (1.0 - s) * inner)
        }
        RegionTag::Abar => {
            let u = z.re - c0.re;
            let s = (u - PI) / PI;
            let outer = eval_h2(c(c0.re + 2.0 * PI, z.im))?;
            let inner = eval_k2(c(c0.re + PI, z.im), p)?;
            Ok(s * outer + (1.0 - s) * inner)
        }
        RegionTag::Cap => {
            let zeta = z - c0;
            let r = zeta.norm();
            let dir = zeta / r;
            let s = (r - PI) / PI;
            let outer = eval_h2(c0 + 2.0 * PI * dir)?;
            let inner = eval_k2(c0 + PI * dir, p)?;
            Ok(s * outer + (1.0 - s) * inner)
        }
        RegionTag::B => unreachable!("family 2 has no B region"),
    }
}

/// The interpolant `P` (rectangular zones) or `Q` (cap) with
/// `F(z) = const + slope*z + interpolant`; `None` on analytic pieces.
pub fn interpolant(z: Complex64, p: &ConstructionParams) -> Option<Complex64> {
    let tag = region_of(z, p);
    if !tag.is_interpolation() {
        return None;
    }
    let (affine, slope) = match p.family {
        Family::Theorem1 => (translation1(p), 1.0),
        Family::Theorem2 => (Complex64::new(translation2(), 0.0), 2.0),
    };
    eval_f(z, p).ok().map(|f| f - affine - slope * z)
}

/// Closed-form Wirtinger derivatives `(F_z, F_zbar)` of the glued map.
///
/// Analytic pieces have `F_zbar = 0` exactly. Interpolation zones use the
/// closed forms of the interpolant derivatives. Values may be non-finite
/// where the underlying map itself leaves f64 range.
pub fn wirtinger_f(z: Complex64, p: &ConstructionParams) -> (Complex64, Complex64) {
    wirtinger_in_region(z, p, region_of(z, p))
}

/// Wirtinger derivatives of the closed form attached to `tag`, evaluated at
/// `z`. On shared boundaries this is the continuous extension of that
/// piece's formula, which is what grid checks over the closed zones need
/// (the tie-breaking region may carry a different, even non-representable,
/// closed form there).
pub fn wirtinger_in_region(
    z: Complex64,
    p: &ConstructionParams,
    tag: RegionTag,
) -> (Complex64, Complex64) {
    match p.family {
        Family::Theorem1 => wirtinger_f1(z, p, tag),
        Family::Theorem2 => wirtinger_f2(z, p, tag),
    }
}

/// `h'(z) = 1 + e^z` for family 1.
pub fn h1_prime(z: Complex64) -> Complex64 {
    1.0 + z.exp()
}

/// `k'(z) = 1 - e^{-z} exp(e^{-z} - L)` for family 1.
pub fn k1_prime(z: Complex64, p: &ConstructionParams) -> Complex64 {
    let inner = (-z).exp();
    1.0 - inner * (inner - p.damping).exp()
}

/// `h'(z) = 2 - e^z` for family 2.
pub fn h2_prime(z: Complex64) -> Complex64 {
    2.0 - z.exp()
}

/// `k'(z) = 2 - i e^{-iz} exp(e^{-iz} - L)` for family 2.
pub fn k2_prime(z: Complex64, p: &ConstructionParams) -> Complex64 {
    let inner = (-Complex64::i() * z).exp();
    2.0 - Complex64::i() * inner * (inner - p.damping).exp()
}

fn wirtinger_f1(z: Complex64, p: &ConstructionParams, tag: RegionTag) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let x1 = p.x1;
    let ell = p.damping;
    match tag {
        RegionTag::Outside => (h1_prime(z), zero),
        RegionTag::T => (k1_prime(z, p), zero),
        RegionTag::A | RegionTag::Abar => {
            // P = wh * e^x + wk * E,  E = exp(-e^{-x} - L).
            let upper = tag == RegionTag::A;
            let (wh, wk) = if upper {
                ((z.im - PI) / PI, (2.0 * PI - z.im) / PI)
            } else {
                ((-z.im - PI) / PI, (2.0 * PI + z.im) / PI)
            };
            let ex = z.re.exp();
            let e_damp = (-(-z.re).exp() - ell).exp();
            // E * e^{-x} fused into one exponential to dodge 0 * inf.
            let px = wh * ex + wk * (-(-z.re).exp() - ell - z.re).exp();
            let py_signed = (ex - e_damp) / PI;
            let py = if upper { py_signed } else { -py_signed };
            let pz = c(px, 0.0) - Complex64::i() * py;
            let pzbar = c(px, 0.0) + Complex64::i() * py;
            (1.0 + 0.5 * pz, 0.5 * pzbar)
        }
        RegionTag::B => {
            // Q = wh(r) * G(phi) + wk(r) * H(phi) on z = x1 + r e^{i phi},
            //   G = exp(x1 + 2 pi e^{i phi}),  H = exp(-exp(x1 + pi e^{i phi}) - L).
            let zeta = z - x1;
            let r = zeta.norm();
            let dir = zeta / r; // e^{i phi}
            let wh = (r - PI) / PI;
            let wk = (2.0 * PI - r) / PI;
            let g = (x1 + 2.0 * PI * dir).exp();
            let e_in = (x1 + PI * dir).exp();
            let h = (-e_in - ell).exp();
            let dir_conj = dir.conj();
            // r_z = conj(dir)/2, r_zbar = dir/2;
            // phi_z = -i conj(dir)/(2r), phi_zbar = i dir/(2r).
            let qz = dir_conj * (g - h) / (2.0 * PI) + (PI / r) * wh * g
                - (PI / (2.0 * r)) * wk * h * e_in;
            let qzbar = dir * (g - h) / (2.0 * PI)
                + dir * dir * (-(PI / r) * wh * g + (PI / (2.0 * r)) * wk * h * e_in);
            (1.0 + qz, qzbar)
        }
        RegionTag::Cap => unreachable!("family 1 has no Cap region"),
    }
}

fn wirtinger_f2(z: Complex64, p: &ConstructionParams, tag: RegionTag) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let c0 = p.strip_center();
    let ell = p.damping;
    match tag {
        RegionTag::Outside => (h2_prime(z), zero),
        RegionTag::T => (k2_prime(z, p), zero),
        RegionTag::A | RegionTag::Abar => {
            // P = -wh * e^{z_out} + wk * E2,  E2 = exp(e^{-i z_in} - L),
            // with vertical anchors z_out, z_in at fixed abscissae.
            let left = tag == RegionTag::A;
            let u = z.re - c0.re;
            let (wh, wk, out_re, in_re) = if left {
                ((-u - PI) / PI, (2.0 * PI + u) / PI, c0.re - 2.0 * PI, c0.re - PI)
            } else {
                ((u - PI) / PI, (2.0 * PI - u) / PI, c0.re + 2.0 * PI, c0.re + PI)
            };
            let e_out = c(out_re, z.im).exp();
            let inner = (-Complex64::i() * c(in_re, z.im)).exp();
            let e2 = (inner - ell).exp();
            let sign = if left { 1.0 } else { -1.0 };
            let px = sign * (e_out + e2) / PI;
            let py = -wh * Complex64::i() * e_out + wk * e2 * inner;
            let pz = px - Complex64::i() * py;
            let pzbar = px + Complex64::i() * py;
            (2.0 + 0.5 * pz, 0.5 * pzbar)
        }
        RegionTag::Cap => {
            let zeta = z - c0;
            let r = zeta.norm();
            let dir = zeta / r;
            let wh = (r - PI) / PI;
            let wk = (2.0 * PI - r) / PI;
            let g = (c0 + 2.0 * PI * dir).exp();
            let inner = (-Complex64::i() * (c0 + PI * dir)).exp();
            let e2 = (inner - ell).exp();
            let dir_conj = dir.conj();
            let qz = -dir_conj * (g + e2) / (2.0 * PI) - (PI / r) * wh * g
                - Complex64::i() * (PI / (2.0 * r)) * wk * e2 * inner;
            let qzbar = -dir * (g + e2) / (2.0 * PI)
                + dir * dir
                    * ((PI / r) * wh * g + Complex64::i() * (PI / (2.0 * r)) * wk * e2 * inner);
            (2.0 + qz, qzbar)
        }
        RegionTag::B => unreachable!("family 2 has no B region"),
    }
}

/// Named evaluatable maps, for dispatch from configs and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "lower")]
pub enum MapKind {
    Fatou,
    H1,
    K1,
    G1,
    F1,
    H2,
    K2,
    G2,
    F2,
}

impl MapKind {
    pub fn eval(self, z: Complex64, p: &ConstructionParams) -> EvalResult {
        match self {
            MapKind::Fatou => eval_fatou(z),
            MapKind::H1 => eval_h1(z, p),
            MapKind::K1 => eval_k1(z, p),
            MapKind::G1 => eval_g1(z, p),
            MapKind::F1 => {
                let p1 = ConstructionParams {
                    family: Family::Theorem1,
                    ..*p
                };
                eval_f(z, &p1)
            }
            MapKind::H2 => eval_h2(z),
            MapKind::K2 => eval_k2(z, p),
            MapKind::G2 => eval_g2(z),
            MapKind::F2 => {
                let p2 = ConstructionParams {
                    family: Family::Theorem2,
                    ..*p
                };
                eval_f(z, &p2)
            }
        }
    }
}

impl std::fmt::Display for MapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MapKind::Fatou => "fatou",
            MapKind::H1 => "h1",
            MapKind::K1 => "k1",
            MapKind::G1 => "g1",
            MapKind::F1 => "f1",
            MapKind::H2 => "h2",
            MapKind::K2 => "k2",
            MapKind::G2 => "g2",
            MapKind::F2 => "f2",
        };
        write!(f, "{s}")
    }
}
