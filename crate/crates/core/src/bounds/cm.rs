//! Σ_{m ∈ (C∖B(r))∩Z²} |S(m)|² ≥ |C|N/4 − 2π(r²+1)N² for origin-symmetric C.

use serde::{Deserialize, Serialize};

use crate::discrepancy::{ExpSumGrid, PointSet};
use crate::error::{domain, Error, Result};
use crate::geometry::ConvexBody;
use crate::numeric::sum::pairwise;

/// Lattice points a region may hold before enumeration is refused.
pub const CM_BUDGET: u64 = 100_000_000;

pub fn cm_bound(area: f64, r: f64, n: usize) -> f64 {
    let n = n as f64;
    area * n / 4.0 - 2.0 * std::f64::consts::PI * (r * r + 1.0) * n * n
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmRecord {
    pub n: usize,
    pub r: f64,
    pub area: f64,
    pub lattice_points: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// rhs ≤ 0.
    pub vacuous: bool,
}

fn check_origin_symmetric(region: &ConvexBody<f64>) -> Result<()> {
    let scale = region.diameter.max(1.0);
    for i in 0..64 {
        let t = std::f64::consts::PI * i as f64 / 64.0;
        let (a, b) = (region.support(t), region.support(t + std::f64::consts::PI));
        if (a - b).abs() > 1e-9 * scale {
            return domain(format!("region is not origin-symmetric: h({t}) = {a}, h({t} + π) = {b}"));
        }
    }
    Ok(())
}

pub fn cm_verify(region: &ConvexBody<f64>, r: f64, ps: &PointSet) -> Result<CmRecord> {
    if !(r >= 0.0) {
        return domain("r must be nonnegative");
    }
    check_origin_symmetric(region)?;
    let (lo, hi) = region.bounding_box();
    let lo = [lo[0].ceil() as i64, lo[1].ceil() as i64];
    let hi = [hi[0].floor() as i64, hi[1].floor() as i64];
    let boxed = ((hi[0] - lo[0] + 1).max(0) as u64) * ((hi[1] - lo[1] + 1).max(0) as u64);
    if boxed > CM_BUDGET {
        return Err(Error::Budget(format!("region spans {boxed} lattice points")));
    }
    let grid = ExpSumGrid::new(ps, lo, hi)?;
    let mut terms = Vec::new();
    let mut count = 0u64;
    for m2 in lo[1]..=hi[1] {
        for m1 in lo[0]..=hi[0] {
            let (x, y) = (m1 as f64, m2 as f64);
            if x * x + y * y <= r * r || !region.contains([x, y]) {
                continue;
            }
            count += 1;
            terms.push(grid.get([m1, m2]).expect("inside the box").norm_sqr());
        }
    }
    let lhs = pairwise(&terms);
    let rhs = cm_bound(region.area, r, ps.len());
    Ok(CmRecord { n: ps.len(), r, area: region.area, lattice_points: count, lhs, rhs, holds: lhs >= rhs, vacuous: rhs <= 0.0 })
}
