//! Scenario configuration (JSON). Every section has defaults, so `{}` is a
//! valid configuration describing the Poisson solid with identity metric.
//! See `docs/config.md` for the schema.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flat::LineSource;
use crate::grid::Grid2;
use crate::material::{BoundaryMetric, MaterialField, MaterialPair, MaterialPoint};
use crate::ray::Medium;
use crate::synthesis::{GaussianWindow, SeriesPart};

fn poisson() -> MaterialField {
    MaterialField {
        base: MaterialPoint { rho: 1.0, lam: 1.0, mu: 1.0 },
        bumps: Vec::new(),
        working_box: Default::default(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Wave {
    #[default]
    Rayleigh,
    Stoneley,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub name: String,
    pub wave: Wave,
    /// Solid below a free surface.
    pub material: MaterialField,
    /// Solids on both sides of an interface (required for `stoneley`).
    pub pair: Option<MaterialPair>,
    pub metric: BoundaryMetric,
    pub seed: u64,
    pub scan: ScanConfig,
    pub point: PointConfig,
    pub ray: RayConfig,
    pub synth: SynthConfig,
    pub ellipse: EllipseConfig,
    pub verify: VerifyConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "default".into(),
            wave: Wave::Rayleigh,
            material: poisson(),
            pair: None,
            metric: BoundaryMetric::identity(),
            seed: 0,
            scan: Default::default(),
            point: Default::default(),
            ray: Default::default(),
            synth: Default::default(),
            ellipse: Default::default(),
            verify: Default::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    /// Samples of `(0, c_s)`.
    pub samples: usize,
    /// Evaluation point of the material fields.
    pub x: [f64; 2],
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { samples: 1000, x: [0.0, 0.0] }
    }
}

/// Phase-space point for symbol dumps; `tau = slowness * |xi|_g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PointConfig {
    pub x: [f64; 2],
    pub xi: [f64; 2],
    /// Slowness as a fraction of the local `c_s`.
    pub slowness_fraction: f64,
}

impl Default for PointConfig {
    fn default() -> Self {
        Self { x: [0.0, 0.0], xi: [1.0, 0.0], slowness_fraction: 0.5 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RayConfig {
    pub x0: [f64; 2],
    pub xi0: [f64; 2],
    pub t_end: f64,
    pub dt: f64,
    /// Jacobi fields and transport along the ray.
    pub dynamic: bool,
}

impl Default for RayConfig {
    fn default() -> Self {
        Self { x0: [0.0, 0.0], xi0: [1.0, 0.0], t_end: 1.0, dt: 1e-2, dynamic: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    pub packet: GaussianWindow,
    /// Covector nodes per axis.
    pub n_xi: usize,
    pub x_grid: Grid2,
    pub times: Vec<f64>,
    /// Source-driven synthesis instead of a Cauchy packet.
    pub line_source: Option<LineSource>,
    pub force_ray_charts: bool,
    pub dtheta: f64,
    pub seed_spacing: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            packet: GaussianWindow { center: [4.0, 0.0], width: 0.5, x_center: [1.0, 0.0] },
            n_xi: 48,
            x_grid: Grid2 { min: [-3.0, -2.0], max: [3.0, 2.0], n: [61, 41] },
            times: vec![0.0, 0.5, 1.0],
            line_source: None,
            force_ray_charts: false,
            dtheta: 0.05,
            seed_spacing: 0.2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EllipseConfig {
    pub x: [f64; 2],
    pub xi0: [f64; 2],
    /// Samples over one period.
    pub samples: usize,
    pub part: SeriesPart,
}

impl Default for EllipseConfig {
    fn default() -> Self {
        Self { x: [0.0, 0.0], xi0: [3.0, 0.0], samples: 32, part: SeriesPart::Real }
    }
}

/// Sizes of the randomized and scenario checks run by `verify`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub random_materials: usize,
    pub scan_points: usize,
    pub elliptic_points: usize,
    pub stoneley_samples: usize,
    pub stoneley_pairs: usize,
    /// Covector nodes per axis for the flat propagation check.
    pub packet_n: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            random_materials: 100,
            scan_points: 10_000,
            elliptic_points: 1000,
            stoneley_samples: 1000,
            stoneley_pairs: 50,
            packet_n: 256,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Config(format!("at `{path}`: {}", e.inner()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Semantic checks, each naming the offending key.
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, e: Error| Error::Config(format!("at `{key}`: {e}"));
        self.material.validate().map_err(|e| bad("material", e))?;
        self.metric.validate(self.material.working_box()).map_err(|e| bad("metric", e))?;
        if let Some(p) = &self.pair {
            p.plus.validate().map_err(|e| bad("pair.plus", e))?;
            p.minus.validate().map_err(|e| bad("pair.minus", e))?;
        } else if self.wave == Wave::Stoneley {
            return Err(Error::Config("at `pair`: stoneley scenarios need a material pair".into()));
        }
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("at `{key}`: must be > 0, got {v}")))
            }
        };
        if self.scan.samples < 2 {
            return Err(Error::Config("at `scan.samples`: need at least 2".into()));
        }
        let f = self.point.slowness_fraction;
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::Config(format!("at `point.slowness_fraction`: must lie in (0, 1), got {f}")));
        }
        positive("ray.t_end", self.ray.t_end)?;
        positive("ray.dt", self.ray.dt)?;
        positive("synth.packet.width", self.synth.packet.width)?;
        positive("synth.dtheta", self.synth.dtheta)?;
        positive("synth.seed_spacing", self.synth.seed_spacing)?;
        if self.synth.n_xi < 2 {
            return Err(Error::Config("at `synth.n_xi`: need at least 2".into()));
        }
        self.synth.x_grid.validate().map_err(|e| bad("synth.x_grid", e))?;
        if self.synth.times.is_empty() || self.synth.times.iter().any(|t| !(*t >= 0.0)) {
            return Err(Error::Config("at `synth.times`: need non-negative times".into()));
        }
        if let Some(s) = &self.synth.line_source {
            for (k, v) in [
                ("p", s.p),
                ("sigma", s.sigma),
                ("duration", s.duration),
                ("ds", s.ds),
                ("xi_max", s.xi_max),
                ("dxi", s.dxi),
            ] {
                positive(&format!("synth.line_source.{k}"), v)?;
            }
        }
        if self.ellipse.samples < 16 {
            return Err(Error::Config("at `ellipse.samples`: need at least 16".into()));
        }
        if self.verify.packet_n < 8 {
            return Err(Error::Config("at `verify.packet_n`: need at least 8".into()));
        }
        Ok(())
    }

    pub fn medium(&self) -> Result<Medium> {
        match self.wave {
            Wave::Rayleigh => Ok(Medium::Rayleigh(self.material.clone())),
            Wave::Stoneley => {
                let p = self.pair.clone().ok_or_else(|| Error::Config("at `pair`: missing".into()))?;
                Ok(Medium::Stoneley(p))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_the_default() {
        assert_eq!(ScenarioConfig::from_json("{}").unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn errors_name_the_key() {
        let e = ScenarioConfig::from_json(r#"{"material": {"base": {"rho": 1, "lam": 1, "mu": "x"}}}"#).unwrap_err();
        assert!(e.to_string().contains("material.base.mu"), "{e}");
        let e = ScenarioConfig::from_json(r#"{"ray": {"dtt": 1}}"#).unwrap_err();
        assert!(e.to_string().contains("ray"), "{e}");
        let e = ScenarioConfig::from_json(r#"{"material": {"base": {"rho": 1, "lam": 1, "mu": -1}}}"#).unwrap_err();
        assert!(e.to_string().contains("`material`"), "{e}");
        let e = ScenarioConfig::from_json(r#"{"wave": "stoneley"}"#).unwrap_err();
        assert!(e.to_string().contains("`pair`"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }
}
