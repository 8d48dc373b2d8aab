//! Escape-time rasters: per-pixel orbit classification over a complex
//! window, deterministic palette, and bit-exact binary PPM output.

use crate::dynamics::EscapePolicy;
use crate::maps::{eval_g1, EvalResult};
use crate::params::ConstructionParams;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Complex window and pixel raster of one render.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    pub center: [f64; 2],
    pub width: f64,
    pub height: f64,
    pub px_w: u32,
    pub px_h: u32,
}

#[derive(Debug, Clone, Error)]
pub enum RenderError {
    #[error("grid extents must be positive")]
    EmptyGrid,
    #[error("pixel aspect {pixel:.4} deviates from complex aspect {complex:.4} by over 1%")]
    AspectMismatch { pixel: f64, complex: f64 },
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), RenderError> {
        if !(self.width > 0.0 && self.height > 0.0) || self.px_w == 0 || self.px_h == 0 {
            return Err(RenderError::EmptyGrid);
        }
        let pixel = self.px_w as f64 / self.px_h as f64;
        let complex = self.width / self.height;
        if (pixel / complex - 1.0).abs() > 0.01 {
            return Err(RenderError::AspectMismatch { pixel, complex });
        }
        Ok(())
    }

    /// Center of pixel `(i, j)`; row 0 is the top of the window.
    #[inline]
    pub fn pixel_center(&self, i: u32, j: u32) -> Complex64 {
        let re = self.center[0] + ((i as f64 + 0.5) / self.px_w as f64 - 0.5) * self.width;
        let im = self.center[1] + (0.5 - (j as f64 + 0.5) / self.px_h as f64) * self.height;
        Complex64::new(re, im)
    }
}

/// Per-pixel orbit classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PixelClass {
    Escaped(u32),
    Bounded,
    Overflow,
}

#[derive(Debug, Clone)]
pub struct RasterImage {
    pub px_w: u32,
    pub px_h: u32,
    pub classes: Vec<PixelClass>,
}

impl RasterImage {
    pub fn class_at(&self, i: u32, j: u32) -> PixelClass {
        self.classes[(j * self.px_w + i) as usize]
    }
}

/// 256-entry escape palette plus fixed colors for bounded (black) and
/// overflow (magenta) pixels. Generated by an integer formula so the bytes
/// are identical everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette(pub [[u8; 3]; 256]);

impl Default for Palette {
    fn default() -> Self {
        let mut entries = [[0u8; 3]; 256];
        for (n, e) in entries.iter_mut().enumerate() {
            let t = n as u32;
            e[0] = ((t * 5 + 32) % 256) as u8;
            e[1] = ((t * 7 + 96) % 256) as u8;
            e[2] = ((t * 11 + 160) % 256) as u8;
        }
        Self(entries)
    }
}

pub const BOUNDED_COLOR: [u8; 3] = [0, 0, 0];
pub const OVERFLOW_COLOR: [u8; 3] = [255, 0, 255];

impl Palette {
    pub fn color_of(&self, class: PixelClass) -> [u8; 3] {
        match class {
            PixelClass::Escaped(n) => self.0[(n as usize).min(255)],
            PixelClass::Bounded => BOUNDED_COLOR,
            PixelClass::Overflow => OVERFLOW_COLOR,
        }
    }

    pub fn sha256_hex(&self) -> String {
        let mut hasher = Sha256::new();
        for e in &self.0 {
            hasher.update(e);
        }
        hex_string(&hasher.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Orbit classification of a single pixel seed: iteration count at escape,
/// bounded at `n_max`, or overflow (overflow in the escape direction counts
/// as an escape at that step).
fn classify_orbit(
    f: &(impl Fn(Complex64) -> EvalResult + ?Sized),
    z0: Complex64,
    n_max: u32,
    policy: &EscapePolicy,
) -> PixelClass {
    let mut w = z0;
    let mut streak = 0usize;
    let mut prev_measure = policy.measure(w);
    for n in 0..n_max {
        let next = match f(w) {
            Ok(v) if v.re.is_finite() && v.im.is_finite() => v,
            _ => {
                return if policy.directed_at_blowup(w, streak, n as usize) {
                    PixelClass::Escaped(n)
                } else {
                    PixelClass::Overflow
                };
            }
        };
        let m = policy.measure(next);
        if m > prev_measure {
            streak += 1;
        } else {
            streak = 0;
        }
        prev_measure = m;
        w = next;
        if policy.directed(w, streak) {
            return PixelClass::Escaped(n + 1);
        }
        if w.norm() > policy.modulus_fallback {
            return if policy.directed_at_blowup(w, streak, n as usize + 1) {
                PixelClass::Escaped(n + 1)
            } else {
                PixelClass::Overflow
            };
        }
    }
    PixelClass::Bounded
}

/// Escape-time render. The per-pixel computation is pure, so the parallel
/// and serial paths assemble identical rasters.
pub fn render_escape(
    f: impl Fn(Complex64) -> EvalResult + Sync,
    grid: &GridSpec,
    n_max: u32,
    policy: &EscapePolicy,
    parallel: bool,
) -> Result<RasterImage, RenderError> {
    grid.validate()?;
    let w = grid.px_w;
    let row = |j: u32| -> Vec<PixelClass> {
        (0..w)
            .map(|i| classify_orbit(&f, grid.pixel_center(i, j), n_max, policy))
            .collect()
    };
    let classes: Vec<PixelClass> = if parallel {
        (0..grid.px_h)
            .into_par_iter()
            .flat_map_iter(row)
            .collect()
    } else {
        (0..grid.px_h).flat_map(row).collect()
    };
    Ok(RasterImage {
        px_w: grid.px_w,
        px_h: grid.px_h,
        classes,
    })
}

/// Bounded-orbit render of the Siegel model: pixels whose orbit stays in
/// the disk of radius 2 for `n_max` steps are bounded (black), others are
/// colored by their exit time.
pub fn render_siegel(
    p: &ConstructionParams,
    grid: &GridSpec,
    n_max: u32,
    parallel: bool,
) -> Result<RasterImage, RenderError> {
    grid.validate()?;
    let w = grid.px_w;
    let classify = |z0: Complex64| -> PixelClass {
        let mut z = z0;
        for n in 0..n_max {
            match eval_g1(z, p) {
                Ok(v) if v.re.is_finite() && v.im.is_finite() => z = v,
                _ => return PixelClass::Overflow,
            }
            if z.norm() > 2.0 {
                return PixelClass::Escaped(n + 1);
            }
        }
        PixelClass::Bounded
    };
    let row = |j: u32| -> Vec<PixelClass> {
        (0..w).map(|i| classify(grid.pixel_center(i, j))).collect()
    };
    let classes: Vec<PixelClass> = if parallel {
        (0..grid.px_h)
            .into_par_iter()
            .flat_map_iter(row)
            .collect()
    } else {
        (0..grid.px_h).flat_map(row).collect()
    };
    Ok(RasterImage {
        px_w: grid.px_w,
        px_h: grid.px_h,
        classes,
    })
}

/// Binary PPM (P6) bytes of the raster under the palette.
pub fn ppm_bytes(img: &RasterImage, palette: &Palette) -> Vec<u8> {
    let mut out = Vec::with_capacity(32 + (img.px_w * img.px_h * 3) as usize);
    out.extend_from_slice(format!("P6\n{} {}\n255\n", img.px_w, img.px_h).as_bytes());
    for &class in &img.classes {
        out.extend_from_slice(&palette.color_of(class));
    }
    out
}

pub fn write_ppm(
    path: &std::path::Path,
    img: &RasterImage,
    palette: &Palette,
) -> std::io::Result<()> {
    std::fs::write(path, ppm_bytes(img, palette))
}

pub fn ppm_sha256_hex(img: &RasterImage, palette: &Palette) -> String {
    let mut hasher = Sha256::new();
    hasher.update(ppm_bytes(img, palette));
    hex_string(&hasher.finalize())
}

/// Majority-pools a 2x supersampled raster down to the base resolution,
/// for the downscale-consistency check.
pub fn majority_pool(img: &RasterImage) -> RasterImage {
    assert!(img.px_w % 2 == 0 && img.px_h % 2 == 0);
    let (w, h) = (img.px_w / 2, img.px_h / 2);
    let mut classes = Vec::with_capacity((w * h) as usize);
    for j in 0..h {
        for i in 0..w {
            let quad = [
                img.class_at(2 * i, 2 * j),
                img.class_at(2 * i + 1, 2 * j),
                img.class_at(2 * i, 2 * j + 1),
                img.class_at(2 * i + 1, 2 * j + 1),
            ];
            classes.push(pool_quad(quad));
        }
    }
    RasterImage {
        px_w: w,
        px_h: h,
        classes,
    }
}

/// Majority among the coarse kinds (escaped / bounded / overflow); the
/// representative escape count is the quad minimum.
fn pool_quad(quad: [PixelClass; 4]) -> PixelClass {
    let mut escaped = 0;
    let mut bounded = 0;
    let mut overflow = 0;
    let mut min_n = u32::MAX;
    for q in quad {
        match q {
            PixelClass::Escaped(n) => {
                escaped += 1;
                min_n = min_n.min(n);
            }
            PixelClass::Bounded => bounded += 1,
            PixelClass::Overflow => overflow += 1,
        }
    }
    if escaped >= bounded && escaped >= overflow {
        PixelClass::Escaped(min_n)
    } else if bounded >= overflow {
        PixelClass::Bounded
    } else {
        PixelClass::Overflow
    }
}

/// Agreement fraction between two rasters of equal dimensions, comparing
/// coarse kinds only.
pub fn kind_agreement(a: &RasterImage, b: &RasterImage) -> f64 {
    assert_eq!(a.px_w, b.px_w);
    assert_eq!(a.px_h, b.px_h);
    let same = a
        .classes
        .iter()
        .zip(&b.classes)
        .filter(|(x, y)| {
            matches!(
                (x, y),
                (PixelClass::Escaped(_), PixelClass::Escaped(_))
                    | (PixelClass::Bounded, PixelClass::Bounded)
                    | (PixelClass::Overflow, PixelClass::Overflow)
            )
        })
        .count();
    same as f64 / a.classes.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{eval_fatou, MapKind};

    fn fatou_grid() -> GridSpec {
        GridSpec {
            center: [5.0, 0.0],
            width: 20.0,
            height: 20.0,
            px_w: 64,
            px_h: 64,
        }
    }

    #[test]
    fn aspect_validation() {
        let mut g = fatou_grid();
        g.px_h = 40;
        assert!(matches!(
            g.validate(),
            Err(RenderError::AspectMismatch { .. })
        ));
    }

    #[test]
    fn constant_map_all_bounded() {
        let g = fatou_grid();
        let policy = EscapePolicy::default_for(MapKind::Fatou);
        let img = render_escape(|_| Ok(Complex64::new(0.0, 0.0)), &g, 64, &policy, false).unwrap();
        assert!(img.classes.iter().all(|c| *c == PixelClass::Bounded));
    }

    #[test]
    fn fatou_right_halfplane_escapes() {
        let g = fatou_grid();
        let policy = EscapePolicy::default_for(MapKind::Fatou);
        let img = render_escape(eval_fatou, &g, 200, &policy, false).unwrap();
        for j in 0..g.px_h {
            for i in 0..g.px_w {
                let z = g.pixel_center(i, j);
                if z.re > 1.0 {
                    assert!(
                        matches!(img.class_at(i, j), PixelClass::Escaped(_)),
                        "pixel at {z} should escape"
                    );
                }
            }
        }
    }

    #[test]
    fn serial_parallel_identical() {
        let g = fatou_grid();
        let policy = EscapePolicy::default_for(MapKind::Fatou);
        let a = render_escape(eval_fatou, &g, 100, &policy, false).unwrap();
        let b = render_escape(eval_fatou, &g, 100, &policy, true).unwrap();
        let palette = Palette::default();
        assert_eq!(ppm_bytes(&a, &palette), ppm_bytes(&b, &palette));
    }

    #[test]
    fn renders_deterministic() {
        let g = fatou_grid();
        let policy = EscapePolicy::default_for(MapKind::Fatou);
        let a = render_escape(eval_fatou, &g, 100, &policy, true).unwrap();
        let b = render_escape(eval_fatou, &g, 100, &policy, true).unwrap();
        assert_eq!(ppm_sha256_hex(&a, &Palette::default()), ppm_sha256_hex(&b, &Palette::default()));
    }

    #[test]
    fn siegel_center_bounded() {
        let p = ConstructionParams::theorem1_defaults();
        let g = GridSpec {
            center: [0.0, 0.0],
            width: 4.0,
            height: 4.0,
            px_w: 32,
            px_h: 32,
        };
        let img = render_siegel(&p, &g, 300, false).unwrap();
        // The fixed point at the origin stays.
        let mid = img.class_at(16, 16);
        assert!(matches!(mid, PixelClass::Bounded), "{mid:?}");
    }

    #[test]
    fn ppm_header_and_size() {
        let g = fatou_grid();
        let policy = EscapePolicy::default_for(MapKind::Fatou);
        let img = render_escape(eval_fatou, &g, 50, &policy, false).unwrap();
        let bytes = ppm_bytes(&img, &Palette::default());
        let header = b"P6\n64 64\n255\n";
        assert!(bytes.starts_with(header));
        assert_eq!(bytes.len(), header.len() + 64 * 64 * 3);
    }

    #[test]
    fn downscale_consistency() {
        let g = fatou_grid();
        let policy = EscapePolicy::default_for(MapKind::Fatou);
        let direct = render_escape(eval_fatou, &g, 100, &policy, false).unwrap();
        let super_grid = GridSpec {
            px_w: g.px_w * 2,
            px_h: g.px_h * 2,
            ..g
        };
        let supersampled = render_escape(eval_fatou, &super_grid, 100, &policy, false).unwrap();
        let pooled = majority_pool(&supersampled);
        let agreement = kind_agreement(&direct, &pooled);
        assert!(agreement >= 0.95, "agreement = {agreement}");
    }
}
