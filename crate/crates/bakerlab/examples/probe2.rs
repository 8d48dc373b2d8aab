use bakerlab::dynamics::*;
use bakerlab::maps::MapKind;
use bakerlab::params::ConstructionParams;
use num_complex::Complex64;

fn main() {
    let p = ConstructionParams::theorem1_defaults();
    let kind = MapKind::H1;
    let mpol = EscapePolicy::default_for(kind);
    let opol = EscapePolicy { threshold: f64::INFINITY, ..mpol };
    for seed_re in [-10.0, -40.0] {
        let mut orbit = iterate(|z| kind.eval(z, &p), Complex64::new(seed_re, 0.0), 300, &opol);
        annotate_distances(&mut orbit, |z| kind.eval(z, &p), &mpol, &DistanceOptions::default());
        println!("seed {seed_re}: len {} term {:?}", orbit.len(), orbit.terminated);
        for i in (0..orbit.len()).step_by(40) {
            println!("  n={i:3} w=({:8.2},{:9.2}) d={:10.3} ratio={:.5}", orbit.points[i][0], orbit.points[i][1], orbit.dists[i], orbit.ratios[i]);
        }
        let tail = 280;
        println!("  n={tail} w=({:8.2},{:9.2}) d={:10.3} ratio={:.5}", orbit.points[tail][0], orbit.points[tail][1], orbit.dists[tail], orbit.ratios[tail]);
    }
    // membership probes at altitude
    let member = |z: Complex64| escapes(|w| kind.eval(w, &p), z, 200, &mpol);
    for z in [Complex64::new(3.0, 5000.0), Complex64::new(30.0, 5000.0), Complex64::new(300.0, 5000.0), Complex64::new(3.0, 30.0), Complex64::new(30.0, 30.0), Complex64::new(5.0, 0.0)] {
        println!("member({z}) = {}", member(z));
    }
}
