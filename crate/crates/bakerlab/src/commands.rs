//! Subcommand implementations for the `bakerlab` binary.

use anyhow::{Context, Result};
use bakerlab::config::RunConfig;
use bakerlab::dynamics::{
    annotate_distances, iterate, koenig_classify, DistanceOptions, EscapePolicy, Verdict,
};
use bakerlab::hypmetric::verify_w_triple;
use bakerlab::maps::MapKind;
use bakerlab::params::Family;
use bakerlab::qrcheck::{search_admissible_params, verify_interpolation_bounds};
use bakerlab::render::{render_escape, render_siegel, write_ppm, Palette};
use bakerlab::report::{fmt_f64, write_csv, Artifact};
use bakerlab::univalence::{
    auto_branches_for_strip, collision_search, critical_points_k1, h1_collision_seeds,
    landau_bound_check, CollisionMethod,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Parser)]
#[command(name = "bakerlab", version, about = "Baker-domain surgery workbench")]
struct Cli {
    /// TOML config file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate one orbit and dump it as CSV (n, re, im, step, dist, ratio).
    Orbit(OrbitArgs),
    /// Classify the invariant escaping component of a map family.
    Classify(ClassifyArgs),
    /// Verify the interpolation-zone derivative bounds; JSON report.
    QrCheck(QrCheckArgs),
    /// Three-point hyperbolic-metric skeleton over an x ladder; CSV + JSON.
    Metric(MetricArgs),
    /// Tabulate the distortion majorant M_K as CSV (K, x, M).
    Distortion(DistortionArgs),
    /// Escape-time render to PPM with a JSON sidecar.
    Render(RenderArgs),
    /// Search the parameter ladders for an admissible pair; JSON report.
    ParamsSearch(ParamsSearchArgs),
    /// Non-univalence evidence: critical points, Landau bounds, collisions.
    Univalence(UnivalenceArgs),
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long, value_enum, default_value_t = MapKind::F1)]
    map: MapKind,
    #[arg(long, allow_hyphen_values = true)]
    z0_re: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    z0_im: f64,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassifyFamily {
    Fatou,
    Theorem1,
    Theorem2,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, value_enum)]
    family: ClassifyFamily,
    #[arg(long)]
    n_max: Option<usize>,
}

#[derive(Args)]
struct QrCheckArgs {
    #[arg(long)]
    density: Option<usize>,
    #[arg(long)]
    span: Option<f64>,
}

#[derive(Args)]
struct MetricArgs {
    /// Comma-separated abscissa ladder, e.g. 100,200,400.
    #[arg(long, value_delimiter = ',')]
    x_ladder: Option<Vec<f64>>,
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args)]
struct DistortionArgs {
    /// Distortion exponent.
    #[arg(long = "K")]
    k: f64,
    /// Single evaluation point; otherwise a grid is tabulated.
    #[arg(long)]
    x: Option<f64>,
    #[arg(long, default_value_t = 20.0)]
    x_max: f64,
    #[arg(long, default_value_t = 100)]
    points: usize,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long, value_enum)]
    map: Option<MapKind>,
    #[arg(long, allow_hyphen_values = true)]
    center_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    center_im: Option<f64>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    #[arg(long)]
    px: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
    /// Render single-threaded (the raster is identical either way).
    #[arg(long, default_value_t = false)]
    serial: bool,
}

#[derive(Args)]
struct ParamsSearchArgs {
    #[arg(long)]
    margin: Option<f64>,
}

#[derive(Args)]
struct UnivalenceArgs {
    /// Critical-point branches per sign.
    #[arg(long, default_value_t = 4)]
    branch_count: usize,
    /// Pair separations tried at each outer-map critical point.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.3, 0.5])]
    separations: Vec<f64>,
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("bakerlab: cannot configure thread pool: {e}");
            return EXIT_USAGE;
        }
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bakerlab: {e:#}");
            EXIT_USAGE
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path).context("loading config")?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let mut cfg = load_config(cli)?;
    std::fs::create_dir_all(&cli.out)
        .with_context(|| format!("creating output directory {}", cli.out.display()))?;
    match &cli.cmd {
        Command::Orbit(args) => cmd_orbit(cli, &cfg, args),
        Command::Classify(args) => cmd_classify(cli, &mut cfg, args),
        Command::QrCheck(args) => cmd_qr_check(cli, &cfg, args),
        Command::Metric(args) => cmd_metric(cli, &cfg, args),
        Command::Distortion(args) => cmd_distortion(cli, &cfg, args),
        Command::Render(args) => cmd_render(cli, &mut cfg, args),
        Command::ParamsSearch(args) => cmd_params_search(cli, &cfg, args),
        Command::Univalence(args) => cmd_univalence(cli, &cfg, args),
    }
}

fn validated_params(cfg: &RunConfig) -> Result<()> {
    let warnings = cfg
        .params
        .validate()
        .map_err(|e| anyhow::anyhow!("invalid parameters: {e}"))?;
    for w in warnings {
        eprintln!("bakerlab: warning: {w}");
    }
    Ok(())
}

fn escape_policy(cfg: &RunConfig, map: MapKind) -> EscapePolicy {
    EscapePolicy {
        threshold: cfg.escape.threshold,
        consecutive: cfg.escape.consecutive,
        modulus_fallback: cfg.escape.modulus_fallback,
        ..EscapePolicy::default_for(map)
    }
}

fn cmd_orbit(cli: &Cli, cfg: &RunConfig, args: &OrbitArgs) -> Result<i32> {
    validated_params(cfg)?;
    let p = cfg.params;
    let z0 = Complex64::new(args.z0_re, args.z0_im);
    let n_max = args.n.unwrap_or(cfg.orbit.n_max);
    let policy = escape_policy(cfg, args.map);
    let f = |z| args.map.eval(z, &p);
    let mut orbit = iterate(f, z0, n_max, &policy);
    annotate_distances(
        &mut orbit,
        f,
        &policy,
        &DistanceOptions {
            directions: cfg.orbit.directions,
            membership_n_max: cfg.orbit.membership_n_max,
            stride: 1,
            tail_fraction: 1.0,
        },
    );
    let path = cli.out.join(format!("orbit_{}.csv", args.map));
    let file = std::fs::File::create(&path)?;
    write_csv(
        file,
        &["n", "re", "im", "step", "dist", "ratio"],
        (0..orbit.len()).map(|n| {
            vec![
                n.to_string(),
                fmt_f64(orbit.points[n][0]),
                fmt_f64(orbit.points[n][1]),
                orbit.steps.get(n).copied().map(fmt_f64).unwrap_or_default(),
                fmt_f64(orbit.dists[n]),
                fmt_f64(orbit.ratios[n]),
            ]
        }),
    )?;
    println!(
        "orbit: {} points, terminated {:?}, written to {}",
        orbit.len(),
        orbit.terminated,
        path.display()
    );
    Ok(EXIT_OK)
}

/// Seed ladders spanning each family's invariant component, shallow to
/// deep.
fn classify_seeds(family: ClassifyFamily) -> (MapKind, Vec<Complex64>) {
    let c = Complex64::new;
    match family {
        ClassifyFamily::Fatou => (
            MapKind::Fatou,
            vec![
                c(5.0, 0.0),
                c(10.0, 0.0),
                c(20.0, 0.0),
                c(40.0, 0.0),
                c(7.0, 2.0),
                c(15.0, -3.0),
                c(25.0, 5.0),
                c(33.0, 0.0),
            ],
        ),
        ClassifyFamily::Theorem1 => (
            MapKind::H1,
            vec![
                c(-10.0, 0.0),
                c(-15.0, 3.0),
                c(-20.0, 2.0),
                c(-40.0, 0.0),
                c(-80.0, -2.0),
                c(-120.0, -2.5),
                c(-160.0, 1.0),
                c(-320.0, 0.0),
            ],
        ),
        ClassifyFamily::Theorem2 => (
            MapKind::H2,
            vec![
                c(2.0, 0.0),
                c(2.5, 0.0),
                c(3.0, 0.0),
                c(3.5, 0.0),
                c(4.0, 0.0),
                c(5.0, 0.0),
                c(4.2, 0.3),
                c(3.4, -0.3),
            ],
        ),
    }
}

fn cmd_classify(cli: &Cli, cfg: &mut RunConfig, args: &ClassifyArgs) -> Result<i32> {
    if args.family != ClassifyFamily::Fatou {
        // Match the construction family so warnings refer to the right one.
        cfg.params.family = match args.family {
            ClassifyFamily::Theorem2 => Family::Theorem2,
            _ => Family::Theorem1,
        };
    }
    validated_params(cfg)?;
    let p = cfg.params;
    let (map, seeds) = classify_seeds(args.family);
    let n_max = args.n_max.unwrap_or(cfg.orbit.n_max);
    let policy = escape_policy(cfg, map);
    let verdict = koenig_classify(
        |z| map.eval(z, &p),
        &policy,
        &seeds,
        n_max,
        &cfg.thresholds,
    );
    let name = format!("classify_{:?}", args.family).to_lowercase();
    let path = cli.out.join(format!("{name}.json"));
    Artifact::new(cfg, &verdict).write(&path)?;
    println!("classify: verdict {} written to {}", verdict.verdict, path.display());
    Ok(if verdict.verdict == Verdict::Inconclusive {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    })
}

fn cmd_qr_check(cli: &Cli, cfg: &RunConfig, args: &QrCheckArgs) -> Result<i32> {
    validated_params(cfg)?;
    let density = args.density.unwrap_or(cfg.qr.grid_density);
    let span = args.span.unwrap_or(cfg.qr.span);
    let report = verify_interpolation_bounds(&cfg.params, density, span);
    let path = cli.out.join("qr_check.json");
    Artifact::new(cfg, &report).write(&path)?;
    println!(
        "qr-check: max|P_z| = {:.3e}, max|P_zbar| = {:.3e}, max K = {:.6}, bound_satisfied = {}",
        report.max_abs_pz, report.max_abs_pzbar, report.max_k, report.bound_satisfied
    );
    Ok(if report.bound_satisfied {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn cmd_metric(cli: &Cli, cfg: &RunConfig, args: &MetricArgs) -> Result<i32> {
    validated_params(cfg)?;
    let ladder = args
        .x_ladder
        .clone()
        .unwrap_or_else(|| cfg.metric.x_ladder.clone());
    let delta = args.delta.unwrap_or(cfg.delta);
    let channel = cfg.metric.channel(&cfg.params);
    let mut reports = Vec::new();
    let mut all_ok = true;
    for &x in &ladder {
        let r = verify_w_triple(&cfg.params, x, delta, channel, cfg.metric.boundary_samples)
            .map_err(|e| anyhow::anyhow!("metric check at x = {x}: {e}"))?;
        all_ok &= r.in_disk;
        reports.push(r);
    }
    let csv_path = cli.out.join("metric_ladder.csv");
    write_csv(
        std::fs::File::create(&csv_path)?,
        &["x", "lower12", "upper23", "in_disk"],
        reports.iter().map(|r| {
            vec![
                fmt_f64(r.x),
                fmt_f64(r.lower12),
                fmt_f64(r.upper23),
                r.in_disk.to_string(),
            ]
        }),
    )?;
    let json_path = cli.out.join("metric_reports.json");
    Artifact::new(cfg, &reports).write(&json_path)?;
    println!(
        "metric: {} ladder points, in_disk everywhere: {all_ok}; {} and {}",
        reports.len(),
        csv_path.display(),
        json_path.display()
    );
    Ok(if all_ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_distortion(cli: &Cli, cfg: &RunConfig, args: &DistortionArgs) -> Result<i32> {
    let rows: Vec<(f64, f64)> = match args.x {
        Some(x) => vec![(x, bakerlab::distortion::m_k(args.k, x)?)],
        None => (0..args.points.max(2))
            .map(|i| {
                let x = args.x_max * i as f64 / (args.points.max(2) - 1) as f64;
                bakerlab::distortion::m_k(args.k, x).map(|v| (x, v))
            })
            .collect::<Result<_, _>>()?,
    };
    let path = cli.out.join("distortion.csv");
    write_csv(
        std::fs::File::create(&path)?,
        &["K", "x", "M"],
        rows.iter()
            .map(|&(x, v)| vec![fmt_f64(args.k), fmt_f64(x), fmt_f64(v)]),
    )?;
    for &(x, v) in &rows {
        println!("{},{},{}", args.k, x, v);
    }
    let _ = cfg;
    Ok(EXIT_OK)
}

fn cmd_render(cli: &Cli, cfg: &mut RunConfig, args: &RenderArgs) -> Result<i32> {
    if let Some(map) = args.map {
        cfg.render.map = map;
    }
    if let Some(v) = args.center_re {
        cfg.render.center[0] = v;
    }
    if let Some(v) = args.center_im {
        cfg.render.center[1] = v;
    }
    if let Some(v) = args.width {
        cfg.render.width = v;
    }
    if let Some(v) = args.height {
        cfg.render.height = v;
    }
    if let Some(v) = args.px {
        cfg.render.px_w = v;
        cfg.render.px_h = v;
    }
    if let Some(v) = args.n_max {
        cfg.render.n_max = v;
    }
    validated_params(cfg)?;
    let p = cfg.params;
    let map = cfg.render.map;
    let grid = cfg.render.grid();
    let palette = Palette::default();
    let img = match map {
        MapKind::G1 | MapKind::G2 => render_siegel(&p, &grid, cfg.render.n_max, !args.serial)
            .map_err(|e| anyhow::anyhow!("render: {e}"))?,
        _ => {
            let policy = escape_policy(cfg, map);
            render_escape(
                |z| map.eval(z, &p),
                &grid,
                cfg.render.n_max,
                &policy,
                !args.serial,
            )
            .map_err(|e| anyhow::anyhow!("render: {e}"))?
        }
    };
    let ppm_path = cli.out.join(format!("render_{map}.ppm"));
    write_ppm(&ppm_path, &img, &palette)?;
    let sidecar = serde_json::json!({
        "map": map,
        "grid": grid,
        "n_max": cfg.render.n_max,
        "palette_sha256": palette.sha256_hex(),
        "ppm_sha256": bakerlab::render::ppm_sha256_hex(&img, &palette),
    });
    let sidecar_path = cli.out.join(format!("render_{map}.json"));
    Artifact::new(cfg, &sidecar).write(&sidecar_path)?;
    println!(
        "render: {} ({}x{}) written to {}",
        map, grid.px_w, grid.px_h, ppm_path.display()
    );
    Ok(EXIT_OK)
}

fn cmd_params_search(cli: &Cli, cfg: &RunConfig, args: &ParamsSearchArgs) -> Result<i32> {
    let mut targets = cfg.search.targets(cfg.qr.span);
    if let Some(m) = args.margin {
        targets.margin = m;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match search_admissible_params(&cfg.params, &targets, &mut rng) {
        Ok(outcome) => {
            let path = cli.out.join("params_search.json");
            Artifact::new(cfg, &outcome).write(&path)?;
            match cfg.params.family {
                Family::Theorem1 => println!(
                    "params-search: admissible x1 = {}, L = {} (margin {})",
                    outcome.params.x1, outcome.params.damping, targets.margin
                ),
                Family::Theorem2 => println!(
                    "params-search: admissible M = {}, L = {} (margin {})",
                    outcome.params.strip_index, outcome.params.damping, targets.margin
                ),
            }
            Ok(EXIT_OK)
        }
        Err(e) => {
            eprintln!("params-search: {e}");
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

fn cmd_univalence(cli: &Cli, cfg: &RunConfig, args: &UnivalenceArgs) -> Result<i32> {
    validated_params(cfg)?;
    let p = cfg.params;
    let branches = match auto_branches_for_strip(&p, args.branch_count) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("univalence: {e}");
            return Ok(EXIT_CHECK_FAILED);
        }
    };
    let roots = critical_points_k1(&p, &branches);
    let strip_roots = roots
        .iter()
        .filter(|r| r.in_core_strip && r.residual < 1e-10)
        .count();

    let policy = escape_policy(cfg, MapKind::H1);
    let member = |z: Complex64| {
        bakerlab::dynamics::escapes(|w| bakerlab::maps::eval_h1(w, &p), z, 200, &policy)
    };
    let seeds = h1_collision_seeds(&[0, 1, -1], &args.separations);
    let collisions = collision_search(
        |z| bakerlab::maps::eval_h1(z, &p),
        &seeds,
        member,
        CollisionMethod::CriticalPointPairing,
    );

    let x_landau = 2.0 * p.damping + 10.0;
    let landau = landau_bound_check(&p, &[p.x1.abs() + 5.0, x_landau]);

    let payload = serde_json::json!({
        "critical_points": roots,
        "strip_roots_below_residual": strip_roots,
        "collisions": collisions,
        "landau": landau,
    });
    let path = cli.out.join("univalence.json");
    Artifact::new(cfg, &payload).write(&path)?;
    println!(
        "univalence: {} strip roots, {} collisions, report {}",
        strip_roots,
        collisions.len(),
        path.display()
    );
    Ok(if strip_roots >= 3 && !collisions.is_empty() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}
