//! Φ(m) = ∫_{−1/10}^{1/10} 1_{R(ω)∖B(ρ₁)}(m) dω for the axis-symmetric
//! rectangle R with vertex (X/2, Y/2).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Half-length of the rotation range.
pub const OMEGA_HALF: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiSpec {
    pub x: f64,
    pub y: f64,
    pub rho1: f64,
}

impl PhiSpec {
    /// X ≥ Y > 0 (equality is the β = 2 case) and ρ₁ ≥ 1.
    pub fn new(x: f64, y: f64, rho1: f64) -> Result<Self> {
        if !(y > 0.0 && x >= y) || !(rho1 >= 1.0) {
            return domain(format!("need X ≥ Y > 0 and ρ₁ ≥ 1, got X = {x}, Y = {y}, ρ₁ = {rho1}"));
        }
        Ok(PhiSpec { x, y, rho1 })
    }

    /// Radius beyond which Φ vanishes: the rectangle's half-diagonal.
    pub fn reach(&self) -> f64 {
        0.5 * self.x.hypot(self.y)
    }

    pub fn area(&self) -> f64 {
        self.x * self.y
    }
}

/// Intervals of ψ in [lo, hi] with |sin(ψ − shift)| ≤ a (a < 1).
fn arcs(a: f64, shift: f64, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    if a >= 1.0 {
        return vec![(lo, hi)];
    }
    let w = a.asin();
    let k0 = ((lo - shift - w) / PI).floor() as i64 - 1;
    let k1 = ((hi - shift + w) / PI).ceil() as i64 + 1;
    (k0..=k1)
        .filter_map(|k| {
            let c = shift + k as f64 * PI;
            let (a, b) = ((c - w).max(lo), (c + w).min(hi));
            (b > a).then_some((a, b))
        })
        .collect()
}

/// Measure of {ω ∈ [−1/10, 1/10] : R(−ω)m ∈ R, |m| > ρ₁}, closed form.
pub fn phi_weight(spec: &PhiSpec, m: [i64; 2]) -> f64 {
    // R(ω) is symmetric under m → −m; fold to the upper half plane so the
    // symmetry is exact in floating point.
    let m = if m[1] < 0 || (m[1] == 0 && m[0] < 0) { [-m[0], -m[1]] } else { m };
    let (x, y) = (m[0] as f64, m[1] as f64);
    let rho = x.hypot(y);
    if rho <= spec.rho1 {
        return 0.0;
    }
    // The rotated vector has angle ψ = arg m − ω; need |ρ sin ψ| ≤ Y/2 and
    // |ρ cos ψ| ≤ X/2; as arcs in ω these are |sin(ω − arg m)| ≤ Y/(2ρ)
    // and |sin(ω − arg m − π/2)| ≤ X/(2ρ).
    let phi = y.atan2(x);
    let (lo, hi) = (-OMEGA_HALF, OMEGA_HALF);
    let a = arcs(spec.y / (2.0 * rho), phi, lo, hi);
    let b = arcs(spec.x / (2.0 * rho), phi + PI / 2.0, lo, hi);
    let mut total = 0.0;
    for &(a0, a1) in &a {
        for &(b0, b1) in &b {
            total += (a1.min(b1) - a0.max(b0)).max(0.0);
        }
    }
    total.min(2.0 * OMEGA_HALF)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Fine ω quadrature of the indicator.
    fn phi_brute(spec: &PhiSpec, m: [i64; 2], n: usize) -> f64 {
        let (x, y) = (m[0] as f64, m[1] as f64);
        if x.hypot(y) <= spec.rho1 {
            return 0.0;
        }
        let h = 2.0 * OMEGA_HALF / n as f64;
        (0..n)
            .filter(|&i| {
                let w = -OMEGA_HALF + (i as f64 + 0.5) * h;
                let (s, c) = w.sin_cos();
                let (u, v) = (c * x + s * y, -s * x + c * y);
                u.abs() <= spec.x / 2.0 && v.abs() <= spec.y / 2.0
            })
            .count() as f64
            * h
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let spec = PhiSpec::new(120.0, 40.0, 3.0).unwrap();
        for m in [[10, 0], [0, 10], [25, 15], [-50, 8], [59, 2], [55, -19], [3, 21], [1, 1]] {
            let a = phi_weight(&spec, m);
            let b = phi_brute(&spec, m, 200_000);
            assert!((a - b).abs() < 1e-5, "{m:?}: {a} vs {b}");
            assert_eq!(a, phi_weight(&spec, [-m[0], -m[1]]));
        }
        assert_eq!(phi_weight(&spec, [10, 0]), 0.2);
        assert_eq!(phi_weight(&spec, [2, 2]), 0.0);
    }
}
