//! Run configuration: TOML file with flat per-module sections, overridable
//! by CLI flags. All randomness is seeded through the config.

use crate::dynamics::ClassifyThresholds;
use crate::maps::MapKind;
use crate::params::{ConstructionParams, Family};
use crate::render::GridSpec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    pub params: ConstructionParams,
    /// Radius margin in the three-point metric check.
    pub delta: f64,
    pub thresholds: ClassifyThresholds,
    pub escape: EscapeSection,
    pub qr: QrSection,
    pub search: SearchSection,
    pub metric: MetricSection,
    pub orbit: OrbitSection,
    pub render: RenderSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            params: ConstructionParams::theorem1_defaults(),
            delta: 0.1,
            thresholds: ClassifyThresholds::default(),
            escape: EscapeSection::default(),
            qr: QrSection::default(),
            search: SearchSection::default(),
            metric: MetricSection::default(),
            orbit: OrbitSection::default(),
            render: RenderSection::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EscapeSection {
    pub threshold: f64,
    pub consecutive: usize,
    pub modulus_fallback: f64,
}

impl Default for EscapeSection {
    fn default() -> Self {
        Self {
            threshold: 50.0,
            consecutive: 3,
            modulus_fallback: 1e8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct QrSection {
    pub grid_density: usize,
    pub span: f64,
    pub growth_samples: usize,
}

impl Default for QrSection {
    fn default() -> Self {
        Self {
            grid_density: 200,
            span: 40.0,
            growth_samples: 100_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchSection {
    pub margin: f64,
    pub grid_density: usize,
    pub growth_samples: usize,
    pub x1_start: f64,
    pub l_start: f64,
    pub m_start: u32,
    pub ladder_len: usize,
}

impl Default for SearchSection {
    fn default() -> Self {
        let t = crate::qrcheck::SearchTargets::default();
        Self {
            margin: t.margin,
            grid_density: t.grid_density,
            growth_samples: t.growth_samples,
            x1_start: t.x1_start,
            l_start: t.l_start,
            m_start: t.m_start,
            ladder_len: t.ladder_len,
        }
    }
}

impl SearchSection {
    pub fn targets(&self, span: f64) -> crate::qrcheck::SearchTargets {
        crate::qrcheck::SearchTargets {
            margin: self.margin,
            grid_density: self.grid_density,
            span,
            growth_samples: self.growth_samples,
            x1_start: self.x1_start,
            l_start: self.l_start,
            m_start: self.m_start,
            ladder_len: self.ladder_len,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricSection {
    /// Lower channel wall height.
    pub y1: f64,
    /// Channel stop abscissa; defaults to the surgery abscissa when NaN.
    pub x2: f64,
    pub x_ladder: Vec<f64>,
    pub boundary_samples: usize,
}

impl Default for MetricSection {
    fn default() -> Self {
        Self {
            y1: -4.0 * std::f64::consts::PI,
            x2: f64::NAN,
            x_ladder: vec![100.0, 200.0, 400.0],
            boundary_samples: 256,
        }
    }
}

impl MetricSection {
    pub fn channel(&self, p: &ConstructionParams) -> crate::hypmetric::ChannelSpec {
        crate::hypmetric::ChannelSpec {
            y1: self.y1,
            x2: if self.x2.is_nan() { p.x1 } else { self.x2 },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct OrbitSection {
    pub n_max: usize,
    pub directions: usize,
    pub membership_n_max: usize,
}

impl Default for OrbitSection {
    fn default() -> Self {
        Self {
            n_max: 300,
            directions: 32,
            membership_n_max: 200,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderSection {
    pub map: MapKind,
    pub center: [f64; 2],
    pub width: f64,
    pub height: f64,
    pub px_w: u32,
    pub px_h: u32,
    pub n_max: u32,
}

impl Default for RenderSection {
    fn default() -> Self {
        Self {
            map: MapKind::Fatou,
            center: [5.0, 0.0],
            width: 20.0,
            height: 20.0,
            px_w: 512,
            px_h: 512,
            n_max: 128,
        }
    }
}

impl RenderSection {
    pub fn grid(&self) -> GridSpec {
        GridSpec {
            center: self.center,
            width: self.width,
            height: self.height,
            px_w: self.px_w,
            px_h: self.px_h,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Ok(toml::from_str(&text)?)
    }

    pub fn family_defaults(family: Family) -> Self {
        let params = match family {
            Family::Theorem1 => ConstructionParams::theorem1_defaults(),
            Family::Theorem2 => ConstructionParams::theorem2_defaults(),
        };
        Self {
            params,
            ..Self::default()
        }
    }
}
