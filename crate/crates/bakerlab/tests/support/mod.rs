//! High-precision complex arithmetic on top of astro-float, used as an
//! independent oracle for the double-precision map evaluators.

use astro_float::{BigFloat, Consts, RoundingMode};
use num_complex::Complex64;

const PREC: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

pub struct Hp {
    cc: Consts,
}

#[derive(Clone, Debug)]
pub struct HpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Default for Hp {
    fn default() -> Self {
        Self::new()
    }
}

impl Hp {
    pub fn new() -> Self {
        Self {
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn real(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, PREC)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(PREC, RM)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PREC, RM, &mut self.cc)
    }

    pub fn radd(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, PREC, RM)
    }

    pub fn rsub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, PREC, RM)
    }

    pub fn rmul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, PREC, RM)
    }

    pub fn from_c64(&self, z: Complex64) -> HpComplex {
        HpComplex {
            re: self.real(z.re),
            im: self.real(z.im),
        }
    }

    pub fn add(&self, a: &HpComplex, b: &HpComplex) -> HpComplex {
        HpComplex {
            re: a.re.add(&b.re, PREC, RM),
            im: a.im.add(&b.im, PREC, RM),
        }
    }

    pub fn sub(&self, a: &HpComplex, b: &HpComplex) -> HpComplex {
        HpComplex {
            re: a.re.sub(&b.re, PREC, RM),
            im: a.im.sub(&b.im, PREC, RM),
        }
    }

    pub fn mul(&self, a: &HpComplex, b: &HpComplex) -> HpComplex {
        let rr = a.re.mul(&b.re, PREC, RM);
        let ii = a.im.mul(&b.im, PREC, RM);
        let ri = a.re.mul(&b.im, PREC, RM);
        let ir = a.im.mul(&b.re, PREC, RM);
        HpComplex {
            re: rr.sub(&ii, PREC, RM),
            im: ri.add(&ir, PREC, RM),
        }
    }

    pub fn neg(&self, a: &HpComplex) -> HpComplex {
        HpComplex {
            re: a.re.neg(),
            im: a.im.neg(),
        }
    }

    /// `exp(a) = e^{re} (cos im, sin im)` in high precision.
    pub fn exp(&mut self, a: &HpComplex) -> HpComplex {
        let mag = a.re.exp(PREC, RM, &mut self.cc);
        let c = a.im.cos(PREC, RM, &mut self.cc);
        let s = a.im.sin(PREC, RM, &mut self.cc);
        HpComplex {
            re: mag.mul(&c, PREC, RM),
            im: mag.mul(&s, PREC, RM),
        }
    }

    pub fn norm_sqr(&self, a: &HpComplex) -> BigFloat {
        let rr = a.re.mul(&a.re, PREC, RM);
        let ii = a.im.mul(&a.im, PREC, RM);
        rr.add(&ii, PREC, RM)
    }

    /// Relative deviation `|got - exact| / |exact|` as f64 (via the binary
    /// exponent split to avoid conversion issues).
    pub fn rel_err(&mut self, exact: &HpComplex, got: Complex64) -> f64 {
        let diff = self.sub(&self.from_c64(got), exact);
        let num = self.norm_sqr(&diff);
        let den = self.norm_sqr(exact);
        if den.is_zero() {
            return if num.is_zero() { 0.0 } else { f64::INFINITY };
        }
        let ratio = num.div(&den, PREC, RM).sqrt(PREC, RM);
        bigfloat_to_f64(&ratio)
    }
}

/// Conversion through the decimal rendering; exact enough for tolerance
/// comparisons.
pub fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    format!("{x}").parse::<f64>().unwrap_or(f64::NAN)
}
