//! Acceptance suite: one test per quantitative claim, each printing a
//! PASS line with the measured numbers. Run with `cargo test --test
//! acceptance -- --nocapture` to see them.

use bakerlab::distortion::{m_k, phi_k, verify_mk_properties};
use bakerlab::dynamics::{
    annotate_distances, check_growth_inequality, count_strip_crossings, iterate,
    koenig_classify, ClassifyThresholds, DistanceOptions, EscapePolicy, Verdict,
};
use bakerlab::hypmetric::{verify_w_triple, ChannelSpec};
use bakerlab::maps::{eval_f, eval_fatou, eval_h1, eval_h2, MapKind};
use bakerlab::params::ConstructionParams;
use bakerlab::qrcheck::{search_admissible_params, verify_interpolation_bounds, SearchTargets};
use bakerlab::render::{ppm_bytes, render_escape, GridSpec, Palette};
use bakerlab::univalence::{
    auto_branches_for_strip, collision_search, critical_points_k1, h1_collision_seeds,
    landau_bound_check, CollisionMethod,
};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

fn searched_params() -> ConstructionParams {
    let base = ConstructionParams::theorem1_defaults();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    search_admissible_params(&base, &SearchTargets::default(), &mut rng)
        .expect("admissible family-1 parameters on the default ladder")
        .params
}

#[test]
fn criterion_01_quasiregularity_bounds() {
    let t0 = Instant::now();
    let p = searched_params();
    let report = verify_interpolation_bounds(&p, 400, 40.0);
    let elapsed = t0.elapsed();
    assert!(
        report.max_abs_pz <= 0.25,
        "max |F_z - 1| = {}",
        report.max_abs_pz
    );
    assert!(
        report.max_abs_pzbar <= 0.25,
        "max |F_zbar| = {}",
        report.max_abs_pzbar
    );
    assert!(report.max_k <= 2.0, "max K = {}", report.max_k);
    assert!(report.bound_satisfied);
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "grid check took {elapsed:?}"
    );
    println!(
        "criterion 1: PASS - x1={}, L={}, max|P_z|={:.3e}, max|P_zbar|={:.3e}, max K={:.6} ({:?})",
        p.x1, p.damping, report.max_abs_pz, report.max_abs_pzbar, report.max_k, elapsed
    );
}

#[test]
fn criterion_02_growth_inequality() {
    let p = searched_params();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let report = check_growth_inequality(&p, 100_000, 40.0, &mut rng);
    assert!(report.pass, "min margin {}", report.min_margin);
    assert!(report.min_margin > 0.0);
    println!(
        "criterion 2: PASS - min margin {:.6} over {} samples of the closed zones",
        report.min_margin, report.samples
    );
}

#[test]
fn criterion_03_crossing_property() {
    let p = searched_params();
    let policy = EscapePolicy::default_for(MapKind::F1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut max_crossings = 0;
    for i in 0..500 {
        let z = if i % 2 == 0 {
            // Seeds in the region above the strip, left of x0.
            Complex64::new(
                p.x0 - rng.gen_range(0.0..30.0),
                rng.gen_range(2.0 * PI..50.0),
            )
        } else {
            bakerlab::dynamics::sample_interpolation_zone(&p, 30.0, &mut rng)
        };
        let orbit = iterate(|w| eval_f(w, &p), z, 300, &policy);
        let crossings = count_strip_crossings(&orbit, &p);
        let expected = if i % 2 == 0 { 0 } else { 1 };
        assert_eq!(
            crossings, expected,
            "orbit from {z} crossed {crossings} times"
        );
        max_crossings = max_crossings.max(crossings);
    }
    println!(
        "criterion 3: PASS - 500 orbits (n=300), at most {max_crossings} crossing each, zero violations"
    );
}

fn classify_family(
    kind: MapKind,
    seeds: &[Complex64],
    p: &ConstructionParams,
) -> bakerlab::dynamics::ClassificationVerdict {
    koenig_classify(
        |z| kind.eval(z, p),
        &EscapePolicy::default_for(kind),
        seeds,
        300,
        &ClassifyThresholds::default(),
    )
}

#[test]
fn criterion_04_classification_suite() {
    let t0 = Instant::now();
    let p = ConstructionParams::theorem1_defaults();
    let c = Complex64::new;

    let fatou = classify_family(
        MapKind::Fatou,
        &[
            c(5.0, 0.0),
            c(10.0, 0.0),
            c(20.0, 0.0),
            c(40.0, 0.0),
            c(7.0, 2.0),
            c(15.0, -3.0),
            c(25.0, 5.0),
            c(33.0, 0.0),
        ],
        &p,
    );
    assert_eq!(fatou.verdict, Verdict::DoublyParabolic, "{:?}", fatou.notes);

    let herman = classify_family(
        MapKind::H1,
        &[
            c(-10.0, 0.0),
            c(-15.0, 3.0),
            c(-20.0, 2.0),
            c(-40.0, 0.0),
            c(-80.0, -2.0),
            c(-120.0, -2.5),
            c(-160.0, 1.0),
            c(-320.0, 0.0),
        ],
        &p,
    );
    assert_eq!(
        herman.verdict,
        Verdict::SimplyParabolic,
        "{:?}",
        herman.notes
    );

    let hyp = classify_family(
        MapKind::H2,
        &[
            c(2.0, 0.0),
            c(2.5, 0.0),
            c(3.0, 0.0),
            c(3.5, 0.0),
            c(4.0, 0.0),
            c(5.0, 0.0),
            c(4.2, 0.3),
            c(3.4, -0.3),
        ],
        &p,
    );
    assert_eq!(hyp.verdict, Verdict::Hyperbolic, "{:?}", hyp.notes);

    // Evidence arrays must be populated for every verdict.
    for v in [&fatou, &herman, &hyp] {
        assert!(v.seeds.len() >= 8);
        assert!(v.seeds.iter().all(|e| !e.ratio_tail.is_empty()));
        assert!(v.seeds.iter().any(|e| !e.step_bounds.is_empty()));
    }

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "suite took {elapsed:?}");
    println!(
        "criterion 4: PASS - fatou={}, herman family={}, rotated family={} ({:?})",
        fatou.verdict, herman.verdict, hyp.verdict, elapsed
    );
}

#[test]
fn criterion_05_fatou_ratio_decay() {
    let orbit_policy = EscapePolicy {
        threshold: f64::INFINITY,
        ..EscapePolicy::default_for(MapKind::Fatou)
    };
    let membership = EscapePolicy::default_for(MapKind::Fatou);
    let mut orbit = iterate(eval_fatou, Complex64::new(5.0, 0.0), 201, &orbit_policy);
    annotate_distances(
        &mut orbit,
        eval_fatou,
        &membership,
        &DistanceOptions {
            stride: 200,
            tail_fraction: 0.01,
            ..DistanceOptions::default()
        },
    );
    let ratio = orbit.ratios[200];
    assert!(ratio.is_finite());
    assert!(ratio < 0.05, "ratio at n=200 is {ratio}");
    println!(
        "criterion 5: PASS - König ratio at n=200 from w0=5 is {ratio:.6} (dist {:.2})",
        orbit.dists[200]
    );
}

#[test]
fn criterion_06_metric_skeleton() {
    let p = ConstructionParams::theorem1_defaults();
    let delta = 0.1;
    let channel = ChannelSpec::defaults_for(&p);
    let mut reports = Vec::new();
    for &x in &[100.0, 200.0, 400.0] {
        let r = verify_w_triple(&p, x, delta, channel, 256).unwrap();
        assert!(r.in_disk, "in_disk failed at x = {x}: {r:?}");
        reports.push(r);
    }
    // upper23 is x-independent and equals 2 arctanh(r1/r2) exactly.
    let q = reports[0].r1 / reports[0].r2;
    let reference = 0.5 * ((1.0 + q) / (1.0 - q)).ln() * 2.0;
    for r in &reports {
        assert!((r.upper23 - reference).abs() < 1e-12);
        assert!((r.upper23 - reports[0].upper23).abs() < 1e-12);
    }
    // lower12 grows at least 0.8 * dx / (pi - y1) per ladder step.
    for w in reports.windows(2) {
        let dx = w[1].x - w[0].x;
        let need = 0.8 * dx / (PI - channel.y1);
        let got = w[1].lower12 - w[0].lower12;
        assert!(got >= need, "lower12 increase {got} < required {need}");
    }
    println!(
        "criterion 6: PASS - in_disk at x=100/200/400, upper23={:.6} (x-independent), lower12: {:.3} -> {:.3} -> {:.3}",
        reports[0].upper23, reports[0].lower12, reports[1].lower12, reports[2].lower12
    );
}

#[test]
fn criterion_07_distortion_properties() {
    // M_1 is the identity.
    let mut worst_id: f64 = 0.0;
    for i in 0..100 {
        let x = 20.0 * i as f64 / 99.0;
        worst_id = worst_id.max((m_k(1.0, x).unwrap() - x).abs());
    }
    assert!(worst_id < 1e-12, "M_1 deviates by {worst_id}");
    // phi_2 against its closed form 2 sqrt(r)/(1+r).
    let mut worst_phi: f64 = 0.0;
    for i in 0..100 {
        let r = 0.005 + 0.99 * i as f64 / 99.0;
        let expect = 2.0 * r.sqrt() / (1.0 + r);
        worst_phi = worst_phi.max((phi_k(2.0, r).unwrap() - expect).abs());
    }
    assert!(worst_phi < 1e-10, "phi_2 deviates by {worst_phi}");
    // Monotonicity, concavity, and the linear majorant on sampled grids.
    for big_k in [1.5, 2.0, 4.0] {
        let report = verify_mk_properties(big_k, 20.0, 2000).unwrap();
        assert!(report.strictly_increasing, "K={big_k}");
        assert!(
            report.concave,
            "K={big_k}: max second difference {}",
            report.max_second_difference
        );
        assert!(report.linear_majorant_ok, "K={big_k}");
    }
    println!(
        "criterion 7: PASS - |M_1 - id| <= {worst_id:.2e}, |phi_2 - closed form| <= {worst_phi:.2e}, M_K increasing/concave/majorized for K in {{1.5, 2, 4}}"
    );
}

#[test]
fn criterion_08_landau_bounds() {
    let p = searched_params();
    let x = 2.0 * p.damping + 10.0;
    let rows = landau_bound_check(&p, &[x]);
    let row = &rows[0];
    assert!(row.k_bound_ok, "|k| = {} > 2x = {}", row.k_modulus, 2.0 * x);
    assert!(
        row.kprime_vs_sqrt_floor,
        "|k'| = {} < e^(x/2) = {}",
        row.kprime_modulus,
        (0.5 * x).exp()
    );
    assert!(row.chain_holds);
    println!(
        "criterion 8: PASS - at x = 2L+10 = {x}: |k| = {:.3} <= {}, |k'| = {:.4e} >= e^(x/2) = {:.4e}",
        row.k_modulus,
        2.0 * x,
        row.kprime_modulus,
        (0.5 * x).exp()
    );
}

#[test]
fn criterion_09_nonunivalence_witness() {
    let p = searched_params();
    // Collision near the outer map's critical point at i pi.
    let seeds = h1_collision_seeds(&[0], &[0.3, 0.5]);
    let collisions = collision_search(
        |z| eval_h1(z, &p),
        &seeds,
        |_| true,
        CollisionMethod::CriticalPointPairing,
    );
    let near: Vec<_> = collisions
        .iter()
        .filter(|c| {
            let z1 = Complex64::new(c.z1[0], c.z1[1]);
            c.residual < 1e-9 && c.separation > 1e-3 && (z1 - Complex64::new(0.0, PI)).norm() < 1.0
        })
        .collect();
    assert!(!near.is_empty(), "no collision witnessed near i pi");
    // Critical points of the strip map inside the core strip.
    let branches = auto_branches_for_strip(&p, 4).expect("branches within f64 range");
    let roots = critical_points_k1(&p, &branches);
    let in_strip: Vec<_> = roots
        .iter()
        .filter(|r| r.in_core_strip && r.residual < 1e-10)
        .collect();
    assert!(
        in_strip.len() >= 3,
        "only {} strip roots below the residual threshold",
        in_strip.len()
    );
    println!(
        "criterion 9: PASS - {} collision(s) near i*pi (best residual {:.2e}, separation {:.3}), {} strip roots with |k'| < 1e-10",
        near.len(),
        near.iter().map(|c| c.residual).fold(f64::INFINITY, f64::min),
        near[0].separation,
        in_strip.len()
    );
}

// Render windows for the golden images of the three criterion-4 maps.
fn golden_specs() -> Vec<(MapKind, GridSpec, u32)> {
    vec![
        (
            MapKind::Fatou,
            GridSpec {
                center: [5.0, 0.0],
                width: 20.0,
                height: 20.0,
                px_w: 256,
                px_h: 256,
            },
            160,
        ),
        (
            MapKind::H1,
            GridSpec {
                center: [0.0, 0.0],
                width: 40.0,
                height: 40.0,
                px_w: 256,
                px_h: 256,
            },
            160,
        ),
        (
            MapKind::H2,
            GridSpec {
                center: [-5.0, 0.0],
                width: 40.0,
                height: 40.0,
                px_w: 256,
                px_h: 256,
            },
            160,
        ),
    ]
}

#[test]
fn criterion_10_render_goldens() {
    let p = ConstructionParams::theorem1_defaults();
    let palette = Palette::default();
    let update = std::env::var_os("BAKERLAB_UPDATE_GOLDENS").is_some();
    for (map, grid, n_max) in golden_specs() {
        let policy = EscapePolicy::default_for(map);
        let serial = render_escape(|z| map.eval(z, &p), &grid, n_max, &policy, false).unwrap();
        let parallel = render_escape(|z| map.eval(z, &p), &grid, n_max, &policy, true).unwrap();
        let serial_bytes = ppm_bytes(&serial, &palette);
        let parallel_bytes = ppm_bytes(&parallel, &palette);
        assert_eq!(serial_bytes, parallel_bytes, "serial/parallel differ for {map}");
        let golden_path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/goldens")
            .join(format!("render_{map}.ppm"));
        if update {
            std::fs::write(&golden_path, &serial_bytes).unwrap();
        } else {
            let golden = std::fs::read(&golden_path)
                .unwrap_or_else(|_| panic!("missing golden {}", golden_path.display()));
            assert_eq!(serial_bytes, golden, "golden mismatch for {map}");
        }
    }
    // Timed full-size render.
    let grid = GridSpec {
        center: [0.0, 0.0],
        width: 40.0,
        height: 40.0,
        px_w: 1024,
        px_h: 1024,
    };
    let policy = EscapePolicy::default_for(MapKind::H1);
    let t0 = Instant::now();
    let img = render_escape(|z| eval_h1(z, &p), &grid, 160, &policy, true).unwrap();
    let elapsed = t0.elapsed();
    assert_eq!(img.classes.len(), 1024 * 1024);
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "1024x1024 render took {elapsed:?}"
    );
    println!(
        "criterion 10: PASS - goldens match, serial == parallel, 1024x1024 in {elapsed:?} on {} cores",
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    );
    // Also confirm the two other full-size maps stay within budget.
    for (map, f) in [
        (MapKind::Fatou, eval_fatou as fn(Complex64) -> _),
        (MapKind::H2, eval_h2 as fn(Complex64) -> _),
    ] {
        let t0 = Instant::now();
        let policy = EscapePolicy::default_for(map);
        let _ = render_escape(f, &grid, 160, &policy, true).unwrap();
        assert!(t0.elapsed().as_secs_f64() < 10.0, "{map} render too slow");
    }
}
