//! Measurements behind the weight/chord comparison and the regime laws.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::power::dilation_avg_power;
use super::transform::Frequency;
use crate::error::{domain, Result};
use crate::geometry::{chord, gamma, ChordQuery, ConvexBody, RegimeWindow};

/// Unit-constant law of w in a regime window; θ is the offset from the
/// flat normal.
pub fn predicted_avg_power(window: &RegimeWindow, rho: f64, theta: f64) -> Result<f64> {
    let beta = window.beta;
    if !(rho >= window.rho_lo && rho <= window.rho_hi) || !(theta.abs() <= window.theta_max) {
        return domain(format!(
            "(ρ = {rho}, θ = {theta}) outside window ρ ∈ [{}, {}], |θ| ≤ {}",
            window.rho_lo, window.rho_hi, window.theta_max
        ));
    }
    Ok(avg_power_law(beta, rho, theta))
}

/// The same law without window checks.
pub fn avg_power_law(beta: f64, rho: f64, theta: f64) -> f64 {
    if beta == 2.0 || theta.abs() <= rho.powf((1.0 - beta) / beta) {
        rho.powf(-2.0 - 2.0 / beta)
    } else {
        rho.powi(-3) * theta.abs().powf((2.0 - beta) / (beta - 1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioStats {
    pub min: f64,
    pub max: f64,
    /// max / min.
    pub spread: f64,
    /// (λ, ratio) per grid point.
    pub points: Vec<(f64, f64)>,
}

impl RatioStats {
    fn from_points(points: Vec<(f64, f64)>) -> Self {
        let min = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        RatioStats { min, max, spread: max / min, points }
    }
}

/// w(λ⁻¹u(θ)) / (λ²γ_C(θ, λ)²) over a λ grid; θ is a body angle.
pub fn verify_l1(body: &ConvexBody<f64>, theta: f64, lambdas: &[f64]) -> Result<RatioStats> {
    let mut pts = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        let w = dilation_avg_power(body, &Frequency::polar(1.0 / l, theta))?.w;
        let g = gamma(body, &ChordQuery::new(theta, l))?;
        pts.push((l, w / (l * l * g * g)));
    }
    Ok(RatioStats::from_points(pts))
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularReport {
    pub bound: f64,
    pub max_ratio: f64,
    pub pairs: usize,
    /// (ρ, θ₁, θ₂, ratio) with ratio above the bound.
    pub violations: Vec<(f64, f64, f64, f64)>,
}

impl AngularReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Acceptance constant of the angular comparison.
pub const ANGULAR_BOUND: f64 = 100.0;

/// w(ρu(θ₁)) ≤ 100 w(ρu(θ₂)) for all grid pairs θ₁ < θ₂ (body angles).
pub fn check_angular_comparison(body: &ConvexBody<f64>, thetas: &[f64], rhos: &[f64]) -> Result<AngularReport> {
    let mut rep = AngularReport { bound: ANGULAR_BOUND, max_ratio: 0.0, pairs: 0, violations: Vec::new() };
    for &rho in rhos {
        let ws: Vec<f64> = thetas
            .iter()
            .map(|&t| dilation_avg_power(body, &Frequency::polar(rho, t)).map(|v| v.w))
            .collect::<Result<_>>()?;
        for i in 0..thetas.len() {
            for j in i + 1..thetas.len() {
                if !(thetas[i] < thetas[j]) {
                    continue;
                }
                rep.pairs += 1;
                let r = ws[i] / ws[j];
                rep.max_ratio = rep.max_ratio.max(r);
                if r > ANGULAR_BOUND {
                    rep.violations.push((rho, thetas[i], thetas[j], r));
                }
            }
        }
    }
    Ok(rep)
}

/// Distance from θ to the nearest multiple of π.
pub fn dist_to_pi_multiple(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    r.min(PI - r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandReport {
    pub band: f64,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
    pub samples: usize,
}

impl BandReport {
    pub fn passed(&self) -> bool {
        self.spread <= self.band
    }
}

/// Acceptance band of the far-from-flat chord check.
pub const CHORD_BAND: f64 = 10.0;

/// |K(θ + π/2, λ)| / λ^{1/2} over offsets with ‖θ‖_π > 1/10.
pub fn check_far_chords(body: &ConvexBody<f64>, offsets: &[f64], lambdas: &[f64]) -> Result<BandReport> {
    let (mut lo, mut hi, mut n) = (f64::INFINITY, 0.0f64, 0usize);
    for &t in offsets.iter().filter(|t| dist_to_pi_multiple(**t) > 0.1) {
        for &l in lambdas {
            let v = chord(body, &ChordQuery::new(t + FRAC_PI_2, l))? / l.sqrt();
            lo = lo.min(v);
            hi = hi.max(v);
            n += 1;
        }
    }
    if n == 0 {
        return domain("no offsets away from the flat directions");
    }
    Ok(BandReport { band: CHORD_BAND, min: lo, max: hi, spread: hi / lo, samples: n })
}

/// Least-squares slope and intercept of log y against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let s = sxy / sxx;
    (s, my - s * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_is_continuous_and_collapses_at_two() {
        for beta in [1.2, 1.5, 1.8] {
            for rho in [10.0, 1e3, 1e5] {
                let edge = f64::powf(rho, (1.0 - beta) / beta);
                let a = rho.powi(-3) * edge.powf((2.0 - beta) / (beta - 1.0));
                let b = f64::powf(rho, -2.0 - 2.0 / beta);
                assert!(((a - b) / b).abs() < 1e-12);
                let up = avg_power_law(beta, rho, edge * (1.0 + 1e-12));
                assert!(((up - b) / b).abs() < 1e-9);
            }
        }
        assert_eq!(avg_power_law(2.0, 10.0, 0.3), 1e-3);
        let w = RegimeWindow { index: 1, beta: 1.5, rho_lo: 10.0, rho_hi: 100.0, theta_max: 0.1 };
        assert!(predicted_avg_power(&w, 5.0, 0.0).is_err());
        assert!(predicted_avg_power(&w, 50.0, 0.2).is_err());
    }

    #[test]
    fn disk_l1_ratios_are_rotation_invariant() {
        let d = ConvexBody::disk(0.25).unwrap();
        let ls = log_grid(1e-3, 1e-1, 6);
        let a = verify_l1(&d, 0.0, &ls).unwrap();
        let b = verify_l1(&d, PI / 3.0, &ls).unwrap();
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!((p.1 - q.1).abs() <= 1e-6 * p.1);
        }
        assert!(a.spread <= 50.0);
    }

    #[test]
    fn slope_of_exact_power() {
        let xs = [1.0, 2.0, 5.0, 9.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.7)).collect();
        let (s, c) = loglog_slope(&xs, &ys);
        assert!((s + 1.7).abs() < 1e-12 && (c - 3f64.ln()).abs() < 1e-12);
    }
}
