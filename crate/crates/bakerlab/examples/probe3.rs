use bakerlab::dynamics::*;
use bakerlab::maps::MapKind;
use bakerlab::params::ConstructionParams;
use num_complex::Complex64;

fn main() {
    let p = ConstructionParams::theorem2_defaults();
    let kind = MapKind::H2;
    let mpol = EscapePolicy::default_for(kind);
    let opol = EscapePolicy { threshold: f64::INFINITY, ..mpol };
    for seed in [Complex64::new(3.0, 0.0), Complex64::new(3.5, 0.0)] {
        let mut orbit = iterate(|z| kind.eval(z, &p), seed, 300, &opol);
        annotate_distances(&mut orbit, |z| kind.eval(z, &p), &mpol, &DistanceOptions::default());
        println!("seed {seed}: len {} term {:?}", orbit.len(), orbit.terminated);
        for i in 0..orbit.len() {
            if orbit.dists[i].is_finite() {
                println!("  n={i:3} w=({:12.4e},{:10.2e}) step={:10.3e} d={:10.3e} ratio={:.4}", orbit.points[i][0], orbit.points[i][1], orbit.steps.get(i).copied().unwrap_or(f64::NAN), orbit.dists[i], orbit.ratios[i]);
            }
        }
    }
}
