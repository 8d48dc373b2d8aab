use bakerlab::dynamics::*;
use bakerlab::maps::MapKind;
use bakerlab::params::ConstructionParams;
use bakerlab::qrcheck::*;
use num_complex::Complex64;
use rand::SeedableRng;

fn main() {
    let t0 = std::time::Instant::now();
    let p = ConstructionParams::theorem1_defaults();
    let scan = siegel_scan(&p, 2000, 40);
    println!("siegel scan: {scan:?}  [{:?}]", t0.elapsed());

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let t0 = std::time::Instant::now();
    let s1 = search_admissible_params(&p, &SearchTargets::default(), &mut rng).unwrap();
    println!("search th1: x1={} L={} margin_qr={:.4} margin_growth={:.4} [{:?}]",
        s1.params.x1, s1.params.damping, s1.qr.margin, s1.growth.min_margin, t0.elapsed());
    let p2 = ConstructionParams::theorem2_defaults();
    let s2 = search_admissible_params(&p2, &SearchTargets::default(), &mut rng).unwrap();
    println!("search th2: M={} L={} margin_qr={:.4} margin_growth={:.4}",
        s2.params.strip_index, s2.params.damping, s2.qr.margin, s2.growth.min_margin);

    // classification three families
    let c = Complex64::new;
    for (name, kind, seeds) in [
        ("fatou", MapKind::Fatou, vec![c(5.,0.), c(10.,0.), c(20.,0.), c(40.,0.), c(7.,2.), c(15.,-3.), c(25.,5.), c(33.,0.)]),
        ("theorem1", MapKind::H1, vec![c(-10.,0.), c(-15.,3.), c(-20.,2.), c(-40.,0.), c(-80.,-2.), c(-120.,-2.5), c(-160.,1.), c(-320.,0.)]),
        ("theorem2", MapKind::H2, vec![c(2.,0.), c(2.5,0.), c(3.,0.), c(3.5,0.), c(4.,0.), c(5.,0.), c(4.2,0.3), c(3.4,-0.3)]),
    ] {
        let t0 = std::time::Instant::now();
        let pol = EscapePolicy::default_for(kind);
        let v = koenig_classify(|z| kind.eval(z, &p), &pol, &seeds, 300, &ClassifyThresholds::default());
        let tails: Vec<String> = v.seeds.iter().map(|e| format!("{:.4}", e.tail_ratio)).collect();
        let mins: Vec<String> = v.seeds.iter().map(|e| format!("{:.4}", e.min_ratio)).collect();
        println!("{name}: {} tails={tails:?} [{:?}]", v.verdict, t0.elapsed());
        println!("   mins={mins:?} notes={:?}", v.notes);
    }

    // fatou ratio at n=200 from w0=5
    let pol = EscapePolicy { threshold: f64::INFINITY, ..EscapePolicy::default_for(MapKind::Fatou) };
    let mpol = EscapePolicy::default_for(MapKind::Fatou);
    let t0 = std::time::Instant::now();
    let mut orbit = iterate(bakerlab::maps::eval_fatou, c(5.0, 0.0), 201, &pol);
    annotate_distances(&mut orbit, bakerlab::maps::eval_fatou, &mpol, &DistanceOptions { stride: 200, ..Default::default() });
    println!("fatou ratio at n=200: {} (d={}) [{:?}]", orbit.ratios[200], orbit.dists[200], t0.elapsed());
}
