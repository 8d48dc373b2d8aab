//! Python bindings: the construction parameters, map evaluation, orbit
//! iteration, classification, quasiregularity report, distortion functions,
//! and escape-time rendering.

use bakerlab::distortion;
use bakerlab::dynamics::{self, EscapePolicy};
use bakerlab::maps::{self, MapKind};
use bakerlab::params::{ConstructionParams, Family};
use bakerlab::qrcheck;
use bakerlab::render::{self, Palette};
use num_complex::Complex64;
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;

fn parse_map(name: &str) -> PyResult<MapKind> {
    Ok(match name {
        "fatou" => MapKind::Fatou,
        "h1" => MapKind::H1,
        "k1" => MapKind::K1,
        "g1" => MapKind::G1,
        "f1" => MapKind::F1,
        "h2" => MapKind::H2,
        "k2" => MapKind::K2,
        "g2" => MapKind::G2,
        "f2" => MapKind::F2,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown map '{other}' (expected one of fatou/h1/k1/g1/f1/h2/k2/g2/f2)"
            )))
        }
    })
}

/// Construction parameters of one surgery family.
#[pyclass(name = "Params", from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: ConstructionParams,
}

#[pymethods]
impl PyParams {
    /// Family-1 defaults (`alpha` golden, `m = 3`, `x1 = -50`, `L = 60`).
    #[staticmethod]
    fn theorem1() -> Self {
        Self {
            inner: ConstructionParams::theorem1_defaults(),
        }
    }

    /// Family-2 defaults (`M = 4`, `L = 25`).
    #[staticmethod]
    fn theorem2() -> Self {
        Self {
            inner: ConstructionParams::theorem2_defaults(),
        }
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[setter]
    fn set_alpha(&mut self, v: f64) {
        self.inner.alpha = v;
    }

    #[getter]
    fn m(&self) -> i32 {
        self.inner.m
    }

    #[setter]
    fn set_m(&mut self, v: i32) {
        self.inner.m = v;
    }

    #[getter]
    fn x1(&self) -> f64 {
        self.inner.x1
    }

    #[setter]
    fn set_x1(&mut self, v: f64) {
        self.inner.x1 = v;
    }

    #[getter]
    fn damping(&self) -> f64 {
        self.inner.damping
    }

    #[setter]
    fn set_damping(&mut self, v: f64) {
        self.inner.damping = v;
    }

    #[getter]
    fn strip_index(&self) -> u32 {
        self.inner.strip_index
    }

    #[setter]
    fn set_strip_index(&mut self, v: u32) {
        self.inner.strip_index = v;
    }

    #[getter]
    fn x0(&self) -> f64 {
        self.inner.x0
    }

    fn validate(&self) -> PyResult<Vec<String>> {
        self.inner
            .validate()
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        match p.family {
            Family::Theorem1 => format!(
                "Params(theorem1, alpha={}, m={}, x1={}, L={}, x0={})",
                p.alpha, p.m, p.x1, p.damping, p.x0
            ),
            Family::Theorem2 => {
                format!("Params(theorem2, M={}, L={})", p.strip_index, p.damping)
            }
        }
    }
}

/// Evaluate a named map at a complex point.
#[pyfunction]
#[pyo3(signature = (map, z, params = None))]
fn eval_map(map: &str, z: Complex64, params: Option<PyParams>) -> PyResult<Complex64> {
    let kind = parse_map(map)?;
    let p = params
        .map(|p| p.inner)
        .unwrap_or_else(default_params_for(kind));
    kind.eval(z, &p)
        .map_err(|_| PyOverflowError::new_err("map evaluation overflowed"))
}

fn default_params_for(kind: MapKind) -> impl Fn() -> ConstructionParams {
    move || match kind {
        MapKind::H2 | MapKind::K2 | MapKind::G2 | MapKind::F2 => {
            ConstructionParams::theorem2_defaults()
        }
        _ => ConstructionParams::theorem1_defaults(),
    }
}

/// Region tag ("outside", "t", "a", "abar", "b", "cap") of a point.
#[pyfunction]
fn region_of(z: Complex64, params: PyParams) -> String {
    format!("{:?}", maps::region_of(z, &params.inner)).to_lowercase()
}

/// Wirtinger derivatives (F_z, F_zbar) of the glued map.
#[pyfunction]
fn wirtinger(z: Complex64, params: PyParams) -> (Complex64, Complex64) {
    maps::wirtinger_f(z, &params.inner)
}

/// Iterate a map; returns (points, termination reason).
#[pyfunction]
#[pyo3(signature = (map, z0, n_max = 300, params = None))]
fn iterate_orbit(
    map: &str,
    z0: Complex64,
    n_max: usize,
    params: Option<PyParams>,
) -> PyResult<(Vec<Complex64>, String)> {
    let kind = parse_map(map)?;
    let p = params
        .map(|p| p.inner)
        .unwrap_or_else(default_params_for(kind));
    let policy = EscapePolicy::default_for(kind);
    let orbit = dynamics::iterate(|z| kind.eval(z, &p), z0, n_max, &policy);
    let pts = (0..orbit.len()).map(|i| orbit.point(i)).collect();
    let reason = format!("{:?}", orbit.terminated).to_lowercase();
    Ok((pts, reason))
}

/// Classify a family ("fatou", "theorem1", "theorem2") by the König ratio.
#[pyfunction]
#[pyo3(signature = (family, n_max = 300))]
fn classify(family: &str, n_max: usize) -> PyResult<String> {
    let (kind, seeds): (MapKind, Vec<Complex64>) = match family {
        "fatou" => (
            MapKind::Fatou,
            [5.0, 10.0, 20.0, 40.0, 7.0, 15.0, 25.0, 33.0]
                .iter()
                .map(|&r| Complex64::new(r, 0.0))
                .collect(),
        ),
        "theorem1" => (
            MapKind::H1,
            [-10.0, -15.0, -20.0, -40.0, -80.0, -120.0, -160.0, -320.0]
                .iter()
                .map(|&r| Complex64::new(r, 0.5))
                .collect(),
        ),
        "theorem2" => (
            MapKind::H2,
            [2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 4.2, 3.4]
                .iter()
                .map(|&r| Complex64::new(r, 0.0))
                .collect(),
        ),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown family '{other}'"
            )))
        }
    };
    let p = default_params_for(kind)();
    let verdict = dynamics::koenig_classify(
        |z| kind.eval(z, &p),
        &EscapePolicy::default_for(kind),
        &seeds,
        n_max,
        &dynamics::ClassifyThresholds::default(),
    );
    Ok(verdict.verdict.to_string())
}

/// Interpolation-zone derivative bound check; returns a dict-like tuple
/// (max_abs_pz, max_abs_pzbar, max_K, bound_satisfied).
#[pyfunction]
#[pyo3(signature = (params, grid_density = 120, span = 40.0))]
fn qr_check(params: PyParams, grid_density: usize, span: f64) -> (f64, f64, f64, bool) {
    let r = qrcheck::verify_interpolation_bounds(&params.inner, grid_density, span);
    (r.max_abs_pz, r.max_abs_pzbar, r.max_k, r.bound_satisfied)
}

/// Grötzsch modulus.
#[pyfunction]
fn mu(r: f64) -> PyResult<f64> {
    distortion::groetzsch_mu(r).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Hersch-Pfluger distortion function.
#[pyfunction]
fn phi_k(k: f64, r: f64) -> PyResult<f64> {
    distortion::phi_k(k, r).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Distortion majorant `M_K(x) = 2 arctanh(phi_K(tanh(x/2)))`.
#[pyfunction]
fn m_k(k: f64, x: f64) -> PyResult<f64> {
    distortion::m_k(k, x).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Escape-time render written to a binary PPM file; returns its SHA-256.
#[pyfunction]
#[pyo3(signature = (path, map, center, width, height, px, n_max = 128, params = None))]
#[allow(clippy::too_many_arguments)]
fn render_ppm(
    path: &str,
    map: &str,
    center: Complex64,
    width: f64,
    height: f64,
    px: u32,
    n_max: u32,
    params: Option<PyParams>,
) -> PyResult<String> {
    let kind = parse_map(map)?;
    let p = params
        .map(|p| p.inner)
        .unwrap_or_else(default_params_for(kind));
    let grid = render::GridSpec {
        center: [center.re, center.im],
        width,
        height,
        px_w: px,
        px_h: px,
    };
    let img = match kind {
        MapKind::G1 | MapKind::G2 => render::render_siegel(&p, &grid, n_max, true),
        _ => render::render_escape(
            |z| kind.eval(z, &p),
            &grid,
            n_max,
            &EscapePolicy::default_for(kind),
            true,
        ),
    }
    .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let palette = Palette::default();
    render::write_ppm(std::path::Path::new(path), &img, &palette)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(render::ppm_sha256_hex(&img, &palette))
}

#[pymodule]
fn bakerlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_function(wrap_pyfunction!(eval_map, m)?)?;
    m.add_function(wrap_pyfunction!(region_of, m)?)?;
    m.add_function(wrap_pyfunction!(wirtinger, m)?)?;
    m.add_function(wrap_pyfunction!(iterate_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(qr_check, m)?)?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(phi_k, m)?)?;
    m.add_function(wrap_pyfunction!(m_k, m)?)?;
    m.add_function(wrap_pyfunction!(render_ppm, m)?)?;
    Ok(())
}
