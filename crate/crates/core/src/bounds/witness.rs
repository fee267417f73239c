//! Weight domination Z·Φ(m) ≲ |m|-powers, the Φ-weighted lower-bound
//! witness and the η = (N+q)^{−4} arithmetic.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cm::cm_bound;
use super::phi::{phi_weight, PhiSpec, OMEGA_HALF};
use super::xyz::XyzParams;
use crate::discrepancy::{ExpSumGrid, PointSet};
use crate::error::{domain, Error, Result};
use crate::fourier::lemmas::dist_to_pi_multiple;
use crate::geometry::RegimeWindow;
use crate::io::atomic_write;
use crate::numeric::sum::pairwise;

/// Lattice points a domination scan may visit.
pub const SCAN_BUDGET: u64 = 10_000_000;
/// Acceptance threshold on the worst domination slack.
pub const DOMINATION_SLACK: f64 = 8.0;

/// ‖arg(m) + π/2‖_π ≤ 1/10: the direction where the flat weight applies.
pub fn is_flat_direction(m: [i64; 2]) -> bool {
    let a = (m[1] as f64).atan2(m[0] as f64);
    dist_to_pi_multiple(a + FRAC_PI_2) <= OMEGA_HALF
}

/// Right-hand side of the domination requirement.
pub fn domination_bound(m: [i64; 2], beta: f64) -> f64 {
    let r = (m[0] as f64).hypot(m[1] as f64);
    if is_flat_direction(m) {
        r.powf(-2.0 - 2.0 / beta)
    } else {
        r.powi(-3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub m: [i64; 2],
    pub phi: f64,
    pub bound: f64,
    /// Z·Φ(m) / bound.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    pub n: u64,
    pub beta: f64,
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub scanned: u64,
    pub nonzero: u64,
    pub worst_slack: f64,
    pub worst_m: Option<[i64; 2]>,
    pub threshold: f64,
    pub passed: bool,
    #[serde(skip)]
    pub points: Vec<ScanPoint>,
}

impl DominationReport {
    /// Heat-map rows m1, m2, phi, bound, slack.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("m1,m2,phi,bound,slack\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{:e},{:e},{:e}", p.m[0], p.m[1], p.phi, p.bound, p.slack);
        }
        atomic_write(path, out.as_bytes())
    }
}

fn check_consistent(spec: &PhiSpec, xyz: &XyzParams, beta: f64) -> Result<()> {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs();
    if !close(spec.x, xyz.x) || !close(spec.y, xyz.y) || (beta - xyz.beta).abs() > 1e-12 {
        return domain(format!(
            "rectangle X = {}, Y = {} at β = {beta} does not match parameters X = {}, Y = {}, β = {}",
            spec.x, spec.y, xyz.x, xyz.y, xyz.beta
        ));
    }
    Ok(())
}

/// Scans |m| ∈ [ρ_lo, min(ρ_hi, X)] and records every point with Φ > 0.
pub fn verify_domination(spec: &PhiSpec, xyz: &XyzParams, beta: f64, window: &RegimeWindow) -> Result<DominationReport> {
    check_consistent(spec, xyz, beta)?;
    if !(window.rho_lo > 0.0 && window.rho_lo <= window.rho_hi) {
        return domain(format!("invalid window [{}, {}]", window.rho_lo, window.rho_hi));
    }
    let (lo, hi) = (window.rho_lo, window.rho_hi.min(spec.x));
    let k = hi.floor() as i64;
    let area = PI * (hi * hi - lo * lo).max(0.0) + 4.0 * hi + 4.0;
    if area > SCAN_BUDGET as f64 {
        return Err(Error::Budget(format!("domination scan of about {area:.0} lattice points")));
    }
    let rows: Vec<(u64, Vec<ScanPoint>)> = (-k..=k)
        .into_par_iter()
        .map(|m2| {
            let mut count = 0u64;
            let mut pts = Vec::new();
            for m1 in -k..=k {
                let r = (m1 as f64).hypot(m2 as f64);
                if r < lo || r > hi {
                    continue;
                }
                count += 1;
                let phi = phi_weight(spec, [m1, m2]);
                if phi > 0.0 {
                    let bound = domination_bound([m1, m2], beta);
                    pts.push(ScanPoint { m: [m1, m2], phi, bound, slack: xyz.z * phi / bound });
                }
            }
            (count, pts)
        })
        .collect();
    let scanned = rows.iter().map(|r| r.0).sum();
    let points: Vec<ScanPoint> = rows.into_iter().flat_map(|r| r.1).collect();
    let worst = points.iter().max_by(|a, b| a.slack.total_cmp(&b.slack));
    let worst_slack = worst.map_or(0.0, |p| p.slack);
    Ok(DominationReport {
        n: xyz.n,
        beta,
        rho_lo: lo,
        rho_hi: hi,
        scanned,
        nonzero: points.len() as u64,
        worst_slack,
        worst_m: worst.map(|p| p.m),
        threshold: DOMINATION_SLACK,
        passed: worst_slack <= DOMINATION_SLACK,
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub n: usize,
    pub support_points: u64,
    /// Σ_m |S(m)|² Φ(m).
    pub weighted_sum: f64,
    /// Z times the weighted sum.
    pub value: f64,
    /// Z·(1/5)·(|R|N/4 − 2π(ρ₁²+1)N²): the integrated Cassels–Montgomery bound.
    pub cm_floor: f64,
    /// The floor is nonpositive.
    pub vacuous: bool,
    /// N^{ε̃} ≥ 4π(ρ₁²+1).
    pub size_condition: bool,
    /// Reading either value against D₂ needs the weight domination.
    pub conditional: bool,
}

/// Z·Σ_m |S(m)|²Φ(m) over the rectangle sweep, next to the CM floor.
pub fn lower_bound_witness(window: &RegimeWindow, ps: &PointSet, spec: &PhiSpec, xyz: &XyzParams) -> Result<WitnessRecord> {
    check_consistent(spec, xyz, window.beta)?;
    let k = spec.reach().floor() as i64;
    let grid = ExpSumGrid::new(ps, [-k, -k], [k, k])?;
    let mut terms = Vec::new();
    for m2 in -k..=k {
        for m1 in -k..=k {
            let phi = phi_weight(spec, [m1, m2]);
            if phi > 0.0 {
                terms.push(grid.get([m1, m2]).expect("inside the box").norm_sqr() * phi);
            }
        }
    }
    let n = ps.len();
    let weighted_sum = pairwise(&terms);
    let cm_floor = xyz.z * 2.0 * OMEGA_HALF * cm_bound(spec.area(), spec.rho1, n);
    let size_condition = (n as f64).powf(xyz.eps_tilde) >= 4.0 * PI * (spec.rho1 * spec.rho1 + 1.0);
    Ok(WitnessRecord {
        n,
        support_points: terms.len() as u64,
        weighted_sum,
        value: xyz.z * weighted_sum,
        cm_floor,
        vacuous: cm_floor <= 0.0,
        size_condition,
        conditional: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UselemArithmetic {
    pub n: u64,
    pub q: u64,
    /// 2N²η^{1/2} at η = (N+q)^{−4}, as numerator / denominator.
    pub numerator: u128,
    pub denominator: u128,
    pub holds: bool,
}

/// Exact check that η = (N+q)^{−4} gives 2N²η^{1/2} = 2N²/(N+q)² ≤ 2.
pub fn uselem_arithmetic(n: u64, q: u64) -> UselemArithmetic {
    let (nn, s) = (n as u128, n as u128 + q as u128);
    let numerator = 2 * nn * nn;
    let denominator = s * s;
    UselemArithmetic { n, q, numerator, denominator, holds: numerator <= 2 * denominator }
}
