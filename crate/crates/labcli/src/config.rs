//! Experiment configuration: body, point family, N schedule, method, seeds
//! and targets. Files are JSON.

use std::path::{Path, PathBuf};

use hqd_core::discrepancy::PointSet;
use hqd_core::geometry::ConvexBody;
use hqd_core::pointsets::{anisotropic_lattice, composite_pointset, grid_lattice, random_pointset};
use hqd_core::{Body, Error};
use serde::{Deserialize, Serialize};

use crate::LabError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodySpec {
    /// Axis-aligned square [0, s]².
    Square { side: f64 },
    Disk { radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    Monomial { beta: f64 },
    Glued { betas: Vec<f64>, ks: Vec<f64> },
    /// A body document written by `body build`.
    File { path: PathBuf },
}

impl BodySpec {
    pub fn build(&self) -> Result<Body, LabError> {
        Ok(match self {
            BodySpec::Square { side } => ConvexBody::square(*side)?,
            BodySpec::Disk { radius } => ConvexBody::disk(*radius)?,
            BodySpec::Polygon { vertices } => ConvexBody::polygon(vertices.clone())?,
            BodySpec::Monomial { beta } => ConvexBody::monomial_body(*beta)?,
            BodySpec::Glued { betas, ks } => ConvexBody::glued(betas, ks)?,
            BodySpec::File { path } => ConvexBody::load_json(path).map_err(|e| LabError::file(path, e))?,
        })
    }

    fn resolve(&mut self, base: &Path) {
        if let BodySpec::File { path } = self {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PointFamily {
    Random,
    /// ⌊√N⌋ × ⌊√N⌋ aligned grid.
    SquareLattice,
    /// G×L lattice tuned to β from Ñ = N.
    Anisotropic { beta: f64 },
    /// Greedy composite of anisotropic lattices with a random filler.
    Composite { beta: f64 },
}

/// A generated set; lattices keep their (G, L) so the dual-lattice
/// evaluator can be used.
pub struct Generated {
    pub points: PointSet,
    pub lattice: Option<(u64, u64)>,
}

impl PointFamily {
    pub fn generate(&self, n: u64, seed: u64) -> Result<Generated, LabError> {
        Ok(match self {
            PointFamily::Random => Generated { points: random_pointset(n as usize, seed)?, lattice: None },
            PointFamily::SquareLattice => {
                let mut g = (n as f64).sqrt() as u64;
                while g * g > n {
                    g -= 1;
                }
                while (g + 1) * (g + 1) <= n {
                    g += 1;
                }
                let prov = hqd_core::discrepancy::Provenance::new("square_lattice", serde_json::json!({ "n": n, "g": g }), None);
                Generated { points: grid_lattice(g, g, prov)?, lattice: Some((g, g)) }
            }
            PointFamily::Anisotropic { beta } => {
                let (p, ps) = anisotropic_lattice(n, *beta)?;
                Generated { points: ps, lattice: Some((p.g, p.l)) }
            }
            PointFamily::Composite { beta } => Generated { points: composite_pointset(n, *beta, seed)?, lattice: None },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub struct NWindow {
    pub n: u64,
    pub q: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// `count` values geometrically spaced between `lo` and `hi`, rounded.
    Geometric { lo: u64, hi: u64, count: usize },
    List(Vec<u64>),
    /// Every N in each [N_i, N_i + q_i], `step` apart.
    Windows { windows: Vec<NWindow>, step: u64 },
}

impl Schedule {
    pub fn values(&self) -> Vec<u64> {
        match self {
            Schedule::Geometric { lo, hi, count } => {
                let (a, b) = ((*lo as f64).ln(), (*hi as f64).ln());
                let c = (*count).max(1);
                (0..c).map(|i| (a + (b - a) * i as f64 / (c - 1).max(1) as f64).exp().round() as u64).collect()
            }
            Schedule::List(v) => v.clone(),
            Schedule::Windows { windows, step } => {
                let mut v = Vec::new();
                for w in windows {
                    let mut n = w.n;
                    while n <= w.n + w.q {
                        v.push(n);
                        n += (*step).max(1);
                    }
                }
                v
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodSpec {
    Direct { samples: usize },
    /// Fixed radius, or `radius_factor` times max(G, L) for lattices.
    Spectral {
        #[serde(default)]
        radius: Option<u64>,
        #[serde(default)]
        radius_factor: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    /// Expected log–log slope.
    #[serde(default)]
    pub exponent: Option<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Bound on max/min of D₂/log N, for logarithmic growth.
    #[serde(default)]
    pub log_band: Option<f64>,
}

fn default_tolerance() -> f64 {
    0.07
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub body: BodySpec,
    pub points: PointFamily,
    pub schedule: Schedule,
    pub method: MethodSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub target: Option<Target>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::file(path, Error::Io(e)))?;
        let mut cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| LabError::Usage(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.body.resolve(base);
        if let Some(out) = &cfg.output {
            if out.is_relative() {
                cfg.output = Some(base.join(out));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let ns = self.schedule.values();
        if ns.is_empty() {
            return Err(LabError::Usage("schedule is empty".into()));
        }
        if ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::Usage(format!("schedule must be strictly increasing: {ns:?}")));
        }
        if ns[0] == 0 {
            return Err(LabError::Usage("schedule contains N = 0".into()));
        }
        if let BodySpec::File { path } = &self.body {
            if !path.exists() {
                return Err(LabError::Usage(format!("body file {} does not exist", path.display())));
            }
        }
        match self.method {
            MethodSpec::Spectral { radius: None, radius_factor: None } => {
                return Err(LabError::Usage("spectral method needs radius or radius_factor".into()))
            }
            MethodSpec::Spectral { radius: None, radius_factor: Some(_) }
                if matches!(self.points, PointFamily::Random | PointFamily::Composite { .. }) =>
            {
                return Err(LabError::Usage("radius_factor applies to lattice families only".into()))
            }
            MethodSpec::Direct { samples } if samples < 64 => {
                return Err(LabError::Usage("direct method needs at least 64 samples".into()))
            }
            _ => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let text = r#"{"name":"t","body":{"kind":"disk","radius":0.25},"points":{"family":"square_lattice"},
            "schedule":{"geometric":{"lo":256,"hi":65536,"count":5}},"method":{"spectral":{"radius_factor":16}}}"#;
        let cfg: ExperimentConfig = serde_json::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.schedule.values(), vec![256, 1024, 4096, 16384, 65536]);
        let bad = ExperimentConfig { schedule: Schedule::List(vec![4, 4]), ..cfg.clone() };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig { points: PointFamily::Random, ..cfg };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn square_lattice_uses_integer_root() {
        let g = PointFamily::SquareLattice.generate(80, 0).unwrap();
        assert_eq!(g.lattice, Some((8, 8)));
        let g = PointFamily::SquareLattice.generate(81, 0).unwrap();
        assert_eq!(g.lattice, Some((9, 9)));
    }
}
