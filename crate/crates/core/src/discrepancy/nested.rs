//! Nested-body comparison |D₂(P, A) − D₂(P, B)| ≤ 2N²η^{1/2} for B ⊂ A
//! with |A ∖ B| = η.

use serde::{Deserialize, Serialize};

use super::direct::{d2_direct, Sampler};
use super::estimate::D2Estimate;
use super::pointset::PointSet;
use super::spectral::{d2_spectral, TailPolicy};
use crate::error::{domain, Error, Result};
use crate::geometry::ConvexBody;

/// Boundary samples of the inner body tested against the outer one.
pub const NESTING_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NestedMethod {
    Direct(Sampler),
    Spectral { radius: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedCheck {
    pub n: usize,
    pub eta: f64,
    pub outer: D2Estimate,
    pub inner: D2Estimate,
    pub difference: f64,
    /// 2N²η^{1/2}.
    pub bound: f64,
    /// Three combined standard errors (direct) or both tail bounds (spectral).
    pub slack: f64,
    pub holds: bool,
}

/// 2N²η^{1/2}.
pub fn nested_bound(n: usize, eta: f64) -> f64 {
    2.0 * (n as f64).powi(2) * eta.sqrt()
}

/// Checks B ⊂ A on boundary samples of B, pulled inward by 1e-12 of the
/// radius so coincident boundaries pass.
pub fn check_nesting(outer: &ConvexBody<f64>, inner: &ConvexBody<f64>) -> Result<()> {
    let c = inner.center;
    for s in inner.boundary_samples(NESTING_SAMPLES) {
        let p = [s.x, s.y];
        let q = [c[0] + (1.0 - 1e-12) * (p[0] - c[0]), c[1] + (1.0 - 1e-12) * (p[1] - c[1])];
        if !outer.contains(q) {
            return Err(Error::Nesting(p[0], p[1]));
        }
    }
    Ok(())
}

pub fn compare_nested(outer: &ConvexBody<f64>, inner: &ConvexBody<f64>, ps: &PointSet, method: &NestedMethod) -> Result<NestedCheck> {
    if outer.diameter > 1.0 + 1e-12 {
        return domain(format!("outer diameter {} exceeds 1", outer.diameter));
    }
    check_nesting(outer, inner)?;
    let eta = (outer.area - inner.area).max(0.0);
    let (a, b, slack) = match method {
        NestedMethod::Direct(s) => {
            let (a, b) = (d2_direct(outer, ps, s)?, d2_direct(inner, ps, s)?);
            let se = a.error.hypot(b.error);
            (a, b, 3.0 * se)
        }
        NestedMethod::Spectral { radius } => {
            let (a, b) = (d2_spectral(outer, ps, *radius, TailPolicy::Warn)?, d2_spectral(inner, ps, *radius, TailPolicy::Warn)?);
            let t = a.error + b.error;
            (a, b, t)
        }
    };
    let difference = (a.value - b.value).abs();
    let bound = nested_bound(ps.len(), eta);
    Ok(NestedCheck { n: ps.len(), eta, holds: difference <= bound + slack, outer: a, inner: b, difference, bound, slack })
}
