//! Dilation-averaged spectral power w(ξ) = ∫₀¹ |1̂_{δC}(ξ)|² dδ = ∫₀¹ δ⁴|1̂_C(δξ)|² dδ.
//!
//! With ξ = ρu and the flux form, 1̂_C(tu) = (i / 2πt) S(t) where
//! S(t) = Σ_k (u·ν_k) e^{−2πi t (p_k·u)}, so
//! w = (1 / 4π²ρ⁵) ∫₀^ρ t² |S(t)|² dt. S is band-limited by the width W of
//! C in direction u; it is evaluated on a uniform t-grid by a type-1 NUFFT
//! and integrated with order-8 Gregory end corrections.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::nodes::{boundary_nodes, NodeSet};
use super::transform::{ft_indicator, Frequency};
use crate::error::{domain, Error, Result};
use crate::geometry::{ConvexBody, Variant, Vec2};
use crate::numeric::bessel::j1_f64;
use crate::numeric::gauss::{gauss_rule, gregory_weights};
use crate::numeric::nufft::nufft1;
use crate::numeric::sum::pairwise;

/// Relative accuracy target of w.
pub const WEIGHT_TARGET: f64 = 1e-6;
/// Grid steps per inverse width.
pub const STEPS_PER_WIDTH: f64 = 32.0;
const GREGORY_ORDER: usize = 8;
const DENSITIES: [f64; 4] = [1.0, 1.5, 2.0, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightValue {
    pub w: f64,
    /// Absolute error estimate.
    pub err: f64,
}

/// w(ρu) from a node set; the error is the h-versus-2h grid difference.
pub fn avg_power_from_nodes(ns: &NodeSet, center: Vec2<f64>, u: Vec2<f64>, rho: f64) -> WeightValue {
    let k = ns.len();
    let mut s = Vec::with_capacity(k);
    let mut c = Vec::with_capacity(k);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (p, v) in ns.points.iter().zip(&ns.nu) {
        let sk = (p[0] - center[0]) * u[0] + (p[1] - center[1]) * u[1];
        lo = lo.min(sk);
        hi = hi.max(sk);
        s.push(sk);
        c.push(u[0] * v[0] + u[1] * v[1]);
    }
    let width = (hi - lo).max(1e-300);
    let mid = 0.5 * (hi + lo);
    let mut m = (rho * STEPS_PER_WIDTH * width).ceil() as usize;
    m = m.max(8 * GREGORY_ORDER);
    m += m % 2;
    let h = rho / m as f64;
    let phases: Vec<f64> = s.iter().map(|sk| 2.0 * PI * h * (sk - mid)).collect();
    let sums = nufft1(&phases, &c, m);
    let f: Vec<f64> = sums.iter().enumerate().map(|(j, z)| (j as f64 * h).powi(2) * z.norm_sqr()).collect();
    let norm = 1.0 / (4.0 * PI * PI * rho.powi(5));
    let wf = gregory_weights(m, GREGORY_ORDER, h);
    let fine: Vec<f64> = wf.iter().zip(&f).map(|(a, b)| a * b).collect();
    let wc = gregory_weights(m / 2, GREGORY_ORDER, 2.0 * h);
    let coarse: Vec<f64> = wc.iter().enumerate().map(|(j, a)| a * f[2 * j]).collect();
    let (wf, wc) = (pairwise(&fine) * norm, pairwise(&coarse) * norm);
    WeightValue { w: wf.max(0.0), err: (wf - wc).abs() }
}

/// Disk closed form: (r²/ρ²)(2πrρ)^{−3} ∫₀^{2πrρ} x² J₁(x)² dx.
pub fn disk_avg_power(r: f64, rho: f64) -> WeightValue {
    if rho == 0.0 {
        let a = PI * r * r;
        return WeightValue { w: a * a / 5.0, err: 0.0 };
    }
    let x_max = 2.0 * PI * r * rho;
    let panels = x_max.ceil().max(1.0) as usize;
    let (g1, g2) = (gauss_rule(16), gauss_rule(24));
    let f = |x: f64| {
        let j = j1_f64(x);
        x * x * j * j
    };
    let mut a = Vec::with_capacity(panels);
    let mut b = Vec::with_capacity(panels);
    for i in 0..panels {
        let (lo, hi) = (x_max * i as f64 / panels as f64, x_max * (i + 1) as f64 / panels as f64);
        a.push(g1.integrate(lo, hi, f));
        b.push(g2.integrate(lo, hi, f));
    }
    let pre = r * r / (rho * rho) / x_max.powi(3);
    let (ia, ib) = (pairwise(&a), pairwise(&b));
    WeightValue { w: pre * ib, err: pre * (ia - ib).abs() + 1e-15 * pre * ib }
}

/// Node sets at increasing densities for all frequencies up to `rho`,
/// built on first use so a radial shell shares them.
pub struct NodeBank<'a> {
    body: &'a ConvexBody<f64>,
    rho: f64,
    sets: Vec<Option<NodeSet>>,
}

impl<'a> NodeBank<'a> {
    pub fn new(body: &'a ConvexBody<f64>, rho: f64) -> Self {
        NodeBank { body, rho, sets: vec![None; DENSITIES.len()] }
    }

    fn get(&mut self, i: usize) -> &NodeSet {
        let (body, rho) = (self.body, self.rho);
        self.sets[i].get_or_insert_with(|| boundary_nodes(body, rho, DENSITIES[i]))
    }

    /// w(ξ) for |ξ| ≤ the bank radius, refined until the target is met.
    pub fn weight(&mut self, xi: &Frequency) -> Result<WeightValue> {
        let rho = xi.magnitude();
        if rho == 0.0 {
            return Ok(WeightValue { w: self.body.area * self.body.area / 5.0, err: 0.0 });
        }
        if let Variant::Disk { radius } = self.body.variant {
            return Ok(disk_avg_power(radius, rho));
        }
        if rho > self.rho * (1.0 + 1e-12) {
            return domain(format!("|ξ| = {rho} beyond the node bank radius {}", self.rho));
        }
        let u = [xi.xi[0] / rho, xi.xi[1] / rho];
        let center = self.body.center;
        let mut prev = avg_power_from_nodes(self.get(0), center, u, rho);
        let mut err = f64::INFINITY;
        for i in 1..DENSITIES.len() {
            let next = avg_power_from_nodes(self.get(i), center, u, rho);
            err = next.err.max((next.w - prev.w).abs());
            if err <= WEIGHT_TARGET * next.w {
                return Ok(WeightValue { w: next.w, err });
            }
            prev = next;
        }
        Err(Error::Accuracy { target: WEIGHT_TARGET, achieved: err / prev.w.max(f64::MIN_POSITIVE) })
    }
}

/// w(ξ) with node-density refinement until the target is met.
pub fn dilation_avg_power(body: &ConvexBody<f64>, xi: &Frequency) -> Result<WeightValue> {
    NodeBank::new(body, xi.magnitude()).weight(xi)
}

/// Reference path: δ-quadrature of the transform itself, split at δ = 1/2,
/// panel count proportional to 1 + ρ·diam, doubled until two passes agree.
pub fn dilation_avg_power_direct(body: &ConvexBody<f64>, xi: &Frequency) -> Result<WeightValue> {
    let rho = xi.magnitude();
    let rule = gauss_rule(16);
    let pass = |per_half: usize| -> Result<f64> {
        let mut parts = Vec::new();
        for half in 0..2 {
            let (a0, b0) = (0.5 * half as f64, 0.5 * (half + 1) as f64);
            for i in 0..per_half {
                let a = a0 + (b0 - a0) * i as f64 / per_half as f64;
                let b = a0 + (b0 - a0) * (i + 1) as f64 / per_half as f64;
                let mut acc = 0.0;
                for (d, w) in rule.mapped(a, b) {
                    let f = ft_indicator(body, &Frequency::continuous([d * xi.xi[0], d * xi.xi[1]]))?;
                    acc += w * d.powi(4) * f.norm_sqr();
                }
                parts.push(acc);
            }
        }
        Ok(pairwise(&parts))
    };
    let mut n = (1.0 + rho * body.diameter).ceil() as usize;
    let mut prev = pass(n)?;
    for _ in 0..6 {
        n *= 2;
        let next = pass(n)?;
        let err = (next - prev).abs();
        if err <= WEIGHT_TARGET * next {
            return Ok(WeightValue { w: next, err });
        }
        prev = next;
    }
    Err(Error::Accuracy { target: WEIGHT_TARGET, achieved: f64::NAN })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_frequency_is_area_squared_over_five() {
        let b = ConvexBody::monomial_body(1.5).unwrap();
        let w = dilation_avg_power(&b, &Frequency::continuous([0.0, 0.0])).unwrap();
        assert_eq!(w.w, b.area * b.area / 5.0);
    }

    #[test]
    fn grid_path_matches_direct_quadrature() {
        let bodies = [ConvexBody::square(0.5).unwrap(), ConvexBody::monomial_body(1.5).unwrap()];
        for b in &bodies {
            for m in [[1i64, 0], [3, 4], [0, 17], [-11, 5]] {
                let xi = Frequency::lattice(m);
                let a = dilation_avg_power(b, &xi).unwrap();
                let d = dilation_avg_power_direct(b, &xi).unwrap();
                assert!((a.w - d.w).abs() <= 1e-6 * d.w, "{m:?}: {} vs {}", a.w, d.w);
            }
        }
    }

    #[test]
    fn disk_closed_form_matches_generic_path() {
        let r = 0.25;
        let d = ConvexBody::disk(r).unwrap();
        for rho in [1.0, 7.5, 60.0] {
            let ns = boundary_nodes(&d, rho, 1.5);
            let g = avg_power_from_nodes(&ns, [0.0, 0.0], [0.6, 0.8], rho);
            let c = disk_avg_power(r, rho);
            assert!((g.w - c.w).abs() <= 1e-8 * c.w, "ρ={rho}: {} vs {}", g.w, c.w);
        }
    }

    #[test]
    fn scaling_identity() {
        // δ²1̂_C(δξ) against the transform of the dilated body.
        let b = ConvexBody::polygon(vec![[0.0, 0.0], [0.6, 0.1], [0.5, 0.7], [0.1, 0.4]]).unwrap();
        let dl = 0.37;
        let s = ConvexBody::polygon(vec![[0.0, 0.0], [0.6 * dl, 0.1 * dl], [0.5 * dl, 0.7 * dl], [0.1 * dl, 0.4 * dl]]).unwrap();
        let xi = [5.0, -3.0];
        let lhs = ft_indicator(&b, &Frequency::continuous([dl * xi[0], dl * xi[1]])).unwrap() * (dl * dl);
        let rhs = ft_indicator(&s, &Frequency::continuous(xi)).unwrap();
        assert!((lhs - rhs).norm() < 1e-9 * s.area);
    }
}
