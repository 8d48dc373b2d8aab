//! High-precision oracle checks: the f64 evaluators against 192-bit
//! re-evaluation of the same closed forms.

mod support;

use bakerlab::maps::{eval_fatou, eval_g1, eval_h1, eval_h2, eval_k2};
use bakerlab::params::ConstructionParams;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::{Hp, HpComplex};

fn hp_translation1(hp: &mut Hp, p: &ConstructionParams) -> HpComplex {
    // 2 pi i (alpha + m)
    let alpha_m = hp.radd(&hp.real(p.alpha), &hp.real(p.m as f64));
    let pi = hp.pi();
    let tau = hp.rmul(&hp.real(2.0), &pi);
    HpComplex {
        re: hp.real(0.0),
        im: hp.rmul(&tau, &alpha_m),
    }
}

fn hp_h1(hp: &mut Hp, z: Complex64, p: &ConstructionParams) -> HpComplex {
    let konst = hp_translation1(hp, p);
    let zh = hp.from_c64(z);
    let ez = hp.exp(&zh);
    hp.add(&hp.add(&konst, &zh), &ez)
}

fn hp_h2(hp: &mut Hp, z: Complex64) -> HpComplex {
    // 2 - log 2 + 2z - e^z
    let ln2 = hp.ln(&hp.real(2.0));
    let c = hp.rsub(&hp.real(2.0), &ln2);
    let zh = hp.from_c64(z);
    let two_z = HpComplex {
        re: hp.rmul(&hp.real(2.0), &zh.re),
        im: hp.rmul(&hp.real(2.0), &zh.im),
    };
    let ez = hp.exp(&zh);
    let head = HpComplex {
        re: hp.radd(&c, &two_z.re),
        im: two_z.im,
    };
    hp.sub(&head, &ez)
}

fn hp_fatou(hp: &mut Hp, z: Complex64) -> HpComplex {
    // z + 1 + e^{-z}
    let zh = hp.from_c64(z);
    let enz = hp.exp(&hp.neg(&zh));
    let head = HpComplex {
        re: hp.radd(&zh.re, &hp.real(1.0)),
        im: zh.im.clone(),
    };
    hp.add(&head, &enz)
}

fn hp_g1(hp: &mut Hp, z: Complex64, p: &ConstructionParams) -> HpComplex {
    // e^{2 pi i alpha} z e^z
    let pi = hp.pi();
    let two_pi = hp.rmul(&hp.real(2.0), &pi);
    let tau_alpha = hp.rmul(&two_pi, &hp.real(p.alpha));
    let rot = hp.exp(&HpComplex {
        re: hp.real(0.0),
        im: tau_alpha,
    });
    let zh = hp.from_c64(z);
    let ez = hp.exp(&zh);
    hp.mul(&hp.mul(&rot, &zh), &ez)
}

fn hp_k2(hp: &mut Hp, z: Complex64, p: &ConstructionParams) -> HpComplex {
    // 2 - log 2 + 2z + exp(e^{-iz} - L)
    let ln2 = hp.ln(&hp.real(2.0));
    let c = hp.rsub(&hp.real(2.0), &ln2);
    let zh = hp.from_c64(z);
    // -iz = (im, -re)
    let minus_iz = HpComplex {
        re: zh.im.clone(),
        im: zh.re.neg(),
    };
    let inner = hp.exp(&minus_iz);
    let damped = HpComplex {
        re: hp.rsub(&inner.re, &hp.real(p.damping)),
        im: inner.im.clone(),
    };
    let pert = hp.exp(&damped);
    let head = HpComplex {
        re: hp.radd(&c, &hp.rmul(&hp.real(2.0), &zh.re)),
        im: hp.rmul(&hp.real(2.0), &zh.im),
    };
    hp.add(&head, &pert)
}

#[test]
fn h1_h2_fatou_match_oracle_on_box() {
    let p = ConstructionParams::theorem1_defaults();
    let mut hp = Hp::new();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let z = Complex64::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));

        let got = eval_h1(z, &p).unwrap();
        let exact = hp_h1(&mut hp, z, &p);
        let err = hp.rel_err(&exact, got);
        worst = worst.max(err);
        assert!(err < 1e-12, "h1 at {z}: rel err {err}");

        let got = eval_h2(z).unwrap();
        let exact = hp_h2(&mut hp, z);
        let err = hp.rel_err(&exact, got);
        worst = worst.max(err);
        assert!(err < 1e-12, "h2 at {z}: rel err {err}");

        let got = eval_fatou(z).unwrap();
        let exact = hp_fatou(&mut hp, z);
        let err = hp.rel_err(&exact, got);
        worst = worst.max(err);
        assert!(err < 1e-12, "fatou at {z}: rel err {err}");
    }
    println!("map oracles on [-50,50]^2: worst relative error {worst:.3e}");
}

#[test]
fn h1_spotcheck_deep_point() {
    let p = ConstructionParams::theorem1_defaults();
    let mut hp = Hp::new();
    let z = Complex64::new(-10.0, 1.0);
    let got = eval_h1(z, &p).unwrap();
    let exact = hp_h1(&mut hp, z, &p);
    assert!(hp.rel_err(&exact, got) < 1e-13);
}

#[test]
fn g1_matches_oracle() {
    let p = ConstructionParams::theorem1_defaults();
    let mut hp = Hp::new();
    for z in [
        Complex64::new(0.1, 0.0),
        Complex64::new(0.3, -0.2),
        Complex64::new(-0.25, 0.31),
    ] {
        let got = eval_g1(z, &p).unwrap();
        let exact = hp_g1(&mut hp, z, &p);
        let err = hp.rel_err(&exact, got);
        assert!(err < 1e-13, "g1 at {z}: rel err {err}");
    }
}

#[test]
fn k2_perturbation_matches_oracle_below_strip() {
    // On the strip axis below the cap, with t > 2 pi, the inner exponent is
    // e^{-t} e^{2 pi M i}; the full value is checked against the oracle.
    let p = ConstructionParams::theorem2_defaults();
    let c0 = p.strip_center();
    let mut hp = Hp::new();
    for t in [2.2 * std::f64::consts::PI, 9.0, 14.0] {
        let z = Complex64::new(c0.re, -t);
        let got = eval_k2(z, &p).unwrap();
        let exact = hp_k2(&mut hp, z, &p);
        let err = hp.rel_err(&exact, got);
        assert!(err < 1e-12, "k2 at {z}: rel err {err}");
    }
}

#[test]
fn collision_reverified_at_higher_precision() {
    // Accepted collision reports for the outer map, re-verified by
    // evaluating |F(z1) - F(z2)| at 192-bit precision.
    use bakerlab::univalence::{collision_search, h1_collision_seeds, CollisionMethod};
    let p = ConstructionParams::theorem1_defaults();
    let seeds = h1_collision_seeds(&[0, 1], &[0.3, 0.5]);
    let found = collision_search(
        |z| eval_h1(z, &p),
        &seeds,
        |_| true,
        CollisionMethod::CriticalPointPairing,
    );
    assert!(!found.is_empty());
    let mut hp = Hp::new();
    for c in &found {
        let z1 = Complex64::new(c.z1[0], c.z1[1]);
        let z2 = Complex64::new(c.z2[0], c.z2[1]);
        let f1 = hp_h1(&mut hp, z1, &p);
        let f2 = hp_h1(&mut hp, z2, &p);
        let diff = hp.sub(&f1, &f2);
        let norm = support::bigfloat_to_f64(&hp.norm_sqr(&diff)).sqrt();
        // The f64 collision is exact to f64 resolution; at 192 bits the
        // residual reflects input rounding, ~|F'| * ulp(z) at worst.
        assert!(
            norm < 1e-9,
            "high-precision residual {norm} for pair ({z1}, {z2})"
        );
    }
}
