//! The indicator transform 1̂_C(ξ) = ∫_C e^{−2πi x·ξ} dx.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::nodes::{boundary_nodes, NodeSet};
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Variant};
use crate::numeric::bessel::jinc_f64;

/// Relative accuracy target of the transform.
pub const FT_TARGET: f64 = 1e-8;
/// Below this value of |ξ|·diam the moment expansion is used.
pub const MOMENT_SWITCH: f64 = 0.05;
const MOMENT_TERMS: usize = 24;
/// Node densities tried in turn; consecutive pairs give the estimate.
const DENSITIES: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub xi: [f64; 2],
    /// Integer coordinates when the frequency is a lattice point.
    pub m: Option<[i64; 2]>,
}

impl Frequency {
    pub fn continuous(xi: [f64; 2]) -> Self {
        Frequency { xi, m: None }
    }

    pub fn lattice(m: [i64; 2]) -> Self {
        Frequency { xi: [m[0] as f64, m[1] as f64], m: Some(m) }
    }

    /// ρ u(θ).
    pub fn polar(rho: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Frequency::continuous([rho * c, rho * s])
    }

    pub fn magnitude(&self) -> f64 {
        self.xi[0].hypot(self.xi[1])
    }

    pub fn angle(&self) -> f64 {
        self.xi[1].atan2(self.xi[0]).rem_euclid(std::f64::consts::TAU)
    }
}

#[inline]
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Flux-form sum over a node set.
pub fn ft_from_nodes(ns: &NodeSet, xi: [f64; 2]) -> Complex64 {
    let r2 = xi[0] * xi[0] + xi[1] * xi[1];
    let mut acc = Complex64::new(0.0, 0.0);
    for (p, v) in ns.points.iter().zip(&ns.nu) {
        let ph = -2.0 * PI * (p[0] * xi[0] + p[1] * xi[1]);
        acc += Complex64::from_polar(xi[0] * v[0] + xi[1] * v[1], ph);
    }
    acc * Complex64::new(0.0, 1.0 / (2.0 * PI * r2))
}

/// Taylor expansion about the body center with moments obtained from
/// ∫_C (y·ξ̂)^k dy = (1/(k+1)) ∮ (y·ξ̂)^{k+1} (ξ̂·n) ds.
fn ft_moments(body: &ConvexBody<f64>, xi: [f64; 2]) -> Complex64 {
    let rho = xi[0].hypot(xi[1]);
    let u = [xi[0] / rho, xi[1] / rho];
    let c = body.center;
    let ns = boundary_nodes(body, 1.0, 1.0);
    let mut mom = [0.0f64; MOMENT_TERMS];
    for (p, v) in ns.points.iter().zip(&ns.nu) {
        let y = (p[0] - c[0]) * u[0] + (p[1] - c[1]) * u[1];
        let f = u[0] * v[0] + u[1] * v[1];
        let mut pw = y;
        for (k, m) in mom.iter_mut().enumerate() {
            *m += pw * f / (k as f64 + 1.0);
            pw *= y;
        }
    }
    let z = Complex64::new(0.0, -2.0 * PI * rho);
    let mut term = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, m) in mom.iter().enumerate() {
        if k > 0 {
            term = term * z / k as f64;
        }
        acc += term * *m;
    }
    acc * Complex64::from_polar(1.0, -2.0 * PI * (c[0] * xi[0] + c[1] * xi[1]))
}

fn polygon_ft(v: &[[f64; 2]], xi: [f64; 2]) -> Complex64 {
    let r2 = xi[0] * xi[0] + xi[1] * xi[1];
    let n = v.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let d = [b[0] - a[0], b[1] - a[1]];
        let mid = [(a[0] + b[0]) * 0.5, (a[1] + b[1]) * 0.5];
        let flux = xi[0] * d[1] - xi[1] * d[0];
        let s = sinc(PI * (xi[0] * d[0] + xi[1] * d[1]));
        acc += Complex64::from_polar(flux * s, -2.0 * PI * (xi[0] * mid[0] + xi[1] * mid[1]));
    }
    acc * Complex64::new(0.0, 1.0 / (2.0 * PI * r2))
}

/// Value and error estimate of 1̂_C(ξ).
pub fn ft_with_estimate(body: &ConvexBody<f64>, xi: &Frequency) -> Result<(Complex64, f64)> {
    let rho = xi.magnitude();
    if rho == 0.0 {
        return Ok((Complex64::new(body.area, 0.0), 0.0));
    }
    match &body.variant {
        Variant::Disk { radius } => {
            let r = *radius;
            let c = body.center;
            let ph = -2.0 * PI * (c[0] * xi.xi[0] + c[1] * xi.xi[1]);
            let v = PI * r * r * jinc_f64(2.0 * PI * r * rho);
            return Ok((Complex64::from_polar(v, ph), 1e-15 * body.area));
        }
        Variant::Polygon { vertices } if rho * body.diameter >= MOMENT_SWITCH => {
            return Ok((polygon_ft(vertices, xi.xi), 1e-14 * body.area));
        }
        _ => {}
    }
    if rho * body.diameter < MOMENT_SWITCH {
        return Ok((ft_moments(body, xi.xi), 1e-15 * body.area));
    }
    let floor = body.area / (1.0 + rho * body.diameter).powi(2);
    let mut prev = ft_from_nodes(&boundary_nodes(body, rho, DENSITIES[0]), xi.xi);
    let mut est = f64::INFINITY;
    for &d in &DENSITIES[1..] {
        let next = ft_from_nodes(&boundary_nodes(body, rho, d), xi.xi);
        est = (next - prev).norm();
        if est <= FT_TARGET * next.norm().max(floor) {
            return Ok((next, est));
        }
        prev = next;
    }
    Err(Error::Accuracy { target: FT_TARGET, achieved: est / prev.norm().max(floor) })
}

pub fn ft_indicator(body: &ConvexBody<f64>, xi: &Frequency) -> Result<Complex64> {
    ft_with_estimate(body, xi).map(|v| v.0)
}
