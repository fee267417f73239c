//! Finite nested chains C₁ ⊂ C₂ ⊂ … and the bridging estimate
//! |D₂(P, C) − D₂(P, C_i)| ≤ 2 once η ≤ (N+q)^{−4}.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::path::Path;

use hqd_core::bounds::{uselem_arithmetic, UselemArithmetic};
use hqd_core::discrepancy::{compare_nested, NestedCheck, NestedMethod};
use hqd_core::pointsets::random_pointset;
use hqd_core::Error;
use serde::{Deserialize, Serialize};

use crate::config::BodySpec;
use crate::LabError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedConfig {
    pub name: String,
    /// Innermost first.
    pub chain: Vec<BodySpec>,
    pub ns: Vec<u64>,
    pub q: u64,
    #[serde(default)]
    pub seed: u64,
    pub radius: u64,
}

/// Square, rounded square and a 128-gon about (0.35, 0.35).
pub fn default_chain() -> Vec<BodySpec> {
    let c = 0.35;
    let a = 0.2;
    let square = vec![[c - a, c - a], [c + a, c - a], [c + a, c + a], [c - a, c + a]];
    // Square of half-side a − r/√2·0.99 grown by r; it contains the corners.
    let r = 0.05;
    let h = a - 0.99 * r * std::f64::consts::FRAC_1_SQRT_2;
    let mut rounded = Vec::new();
    for (k, (sx, sy)) in [(1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0)].iter().enumerate() {
        let start = -FRAC_PI_2 + k as f64 * FRAC_PI_2;
        for j in 0..=16 {
            let t = start + FRAC_PI_2 * j as f64 / 16.0;
            rounded.push([c + sx * h + r * t.cos(), c + sy * h + r * t.sin()]);
        }
    }
    let inradius = std::f64::consts::SQRT_2 * h + r + 0.005;
    let circum = inradius / (std::f64::consts::PI / 128.0).cos();
    let gon: Vec<[f64; 2]> = (0..128)
        .map(|i| {
            let t = TAU * (i as f64 + 0.5) / 128.0;
            [c + circum * t.cos(), c + circum * t.sin()]
        })
        .collect();
    vec![BodySpec::Polygon { vertices: square }, BodySpec::Polygon { vertices: rounded }, BodySpec::Polygon { vertices: gon }]
}

impl NestedConfig {
    pub fn default_demo() -> Self {
        NestedConfig { name: "nested-chain".into(), chain: default_chain(), ns: vec![4, 16, 64], q: 8, seed: 7, radius: 48 }
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::file(path, Error::Io(e)))?;
        serde_json::from_str(&text).map_err(|e| LabError::Usage(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    /// Chain indices, inner then outer.
    pub inner: usize,
    pub outer: usize,
    pub eta: f64,
    pub checks: Vec<NestedCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeRecord {
    pub n: u64,
    pub eta_threshold: f64,
    pub arithmetic: UselemArithmetic,
    /// Chain pairs whose measured η is below (N+q)^{−4}.
    pub pairs_below: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedReport {
    pub config: NestedConfig,
    pub pairs: Vec<PairReport>,
    pub bridging: Vec<BridgeRecord>,
    pub passed: bool,
}

pub fn run_nested_demo(cfg: &NestedConfig) -> Result<NestedReport, LabError> {
    if cfg.chain.len() < 2 || cfg.ns.is_empty() {
        return Err(LabError::Usage("nested demo needs at least two bodies and one N".into()));
    }
    let bodies = cfg.chain.iter().map(|b| b.build()).collect::<Result<Vec<_>, _>>()?;
    let method = NestedMethod::Spectral { radius: cfg.radius };
    let mut pairs = Vec::new();
    for i in 0..bodies.len() - 1 {
        let (inner, outer) = (&bodies[i], &bodies[i + 1]);
        let mut checks = Vec::new();
        for &n in &cfg.ns {
            let ps = random_pointset(n as usize, cfg.seed.wrapping_add(n))?;
            checks.push(compare_nested(outer, inner, &ps, &method)?);
        }
        pairs.push(PairReport { inner: i, outer: i + 1, eta: outer.area - inner.area, checks });
    }
    let bridging = cfg
        .ns
        .iter()
        .map(|&n| {
            let threshold = ((n + cfg.q) as f64).powi(-4);
            BridgeRecord {
                n,
                eta_threshold: threshold,
                arithmetic: uselem_arithmetic(n, cfg.q),
                pairs_below: pairs.iter().filter(|p| p.eta <= threshold).map(|p| (p.inner, p.outer)).collect(),
            }
        })
        .collect::<Vec<_>>();
    let passed = pairs.iter().all(|p| p.checks.iter().all(|c| c.holds)) && bridging.iter().all(|b| b.arithmetic.holds);
    Ok(NestedReport { config: cfg.clone(), pairs, bridging, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_chain_is_nested_and_small() {
        let b: Vec<_> = default_chain().iter().map(|s| s.build().unwrap()).collect();
        for w in b.windows(2) {
            hqd_core::discrepancy::nested::check_nesting(&w[1], &w[0]).unwrap();
            assert!(w[1].area > w[0].area);
        }
        assert!(b[2].diameter <= 1.0);
    }

    #[test]
    fn identical_bodies_give_zero_difference() {
        let sq = BodySpec::Square { side: 0.5 };
        let cfg = NestedConfig { name: "same".into(), chain: vec![sq.clone(), sq], ns: vec![8], q: 1, seed: 1, radius: 16 };
        let r = run_nested_demo(&cfg).unwrap();
        assert_eq!(r.pairs[0].checks[0].difference, 0.0);
        assert!(r.passed);
    }
}
