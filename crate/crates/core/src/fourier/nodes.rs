//! Boundary quadrature nodes for the flux form of the indicator transform,
//! 1̂_C(ξ) = (i / 2π|ξ|²) ∮ e^{−2πi x·ξ} (ξ·n) ds.

use crate::geometry::{ConvexBody, Piece, Placement, Shape, Variant, Vec2};
use crate::numeric::gauss::gauss_rule;

/// Nodes per unit of ρ·(panel length) and fixed base per panel.
pub const NODES_PER_OSC: f64 = 4.0;
pub const BASE_NODES: usize = 8;
/// Oscillation-driven nodes per subpanel before splitting.
const SUBPANEL_CAP: usize = 48;

/// Points p_k and weighted outward normals ν_k = w_k n(p_k) |x'(t_k)|.
#[derive(Debug, Clone, Default)]
pub struct NodeSet {
    pub points: Vec<Vec2<f64>>,
    pub nu: Vec<Vec2<f64>>,
    /// Frequency magnitude the set resolves.
    pub rho: f64,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Full circle as one arc piece, for running disks through the generic path.
pub fn disk_piece(radius: f64) -> Piece<f64> {
    Piece {
        shape: Shape::Arc { radius },
        t0: 0.0,
        t1: std::f64::consts::TAU,
        place: Placement::identity(),
    }
}

fn push_panel(out: &mut NodeSet, lo: f64, hi: f64, len: f64, density: f64, mut eval: impl FnMut(f64) -> (Vec2<f64>, Vec2<f64>)) {
    let osc = (NODES_PER_OSC * density * out.rho * len).ceil() as usize;
    let sub = osc.div_ceil(SUBPANEL_CAP).max(1);
    let n = osc.div_ceil(sub) + BASE_NODES;
    let rule = gauss_rule(n);
    for k in 0..sub {
        let a = lo + (hi - lo) * k as f64 / sub as f64;
        let b = lo + (hi - lo) * (k + 1) as f64 / sub as f64;
        for (t, w) in rule.mapped(a, b) {
            let (p, nu) = eval(t);
            out.points.push(p);
            out.nu.push([nu[0] * w, nu[1] * w]);
        }
    }
}

fn add_piece(out: &mut NodeSet, p: &Piece<f64>, density: f64) {
    let sign = if p.forward() { 1.0 } else { -1.0 };
    for w in p.base_breaks().windows(2) {
        let len = p.arclength_between(w[0], w[1]);
        push_panel(out, w[0], w[1], len, density, |t| {
            let v = p.velocity(t);
            (p.point(t), [sign * v[1], -sign * v[0]])
        });
    }
}

/// Node set resolving frequencies up to `rho`; `density` scales the
/// oscillation-driven node count (1 is the default policy).
pub fn boundary_nodes(body: &ConvexBody<f64>, rho: f64, density: f64) -> NodeSet {
    let mut out = NodeSet { rho: rho.max(1.0), ..Default::default() };
    match &body.variant {
        Variant::Polygon { vertices } => {
            let n = vertices.len();
            for i in 0..n {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let d = [b[0] - a[0], b[1] - a[1]];
                let len = d[0].hypot(d[1]);
                push_panel(&mut out, 0.0, 1.0, len, density, |t| ([a[0] + t * d[0], a[1] + t * d[1]], [d[1], -d[0]]));
            }
        }
        Variant::Disk { radius } => add_piece(&mut out, &disk_piece(*radius), density),
        _ => {
            for p in &body.pieces {
                add_piece(&mut out, p, density);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normals_integrate_to_zero_and_area() {
        for body in [
            ConvexBody::square(0.5).unwrap(),
            ConvexBody::disk(0.25).unwrap(),
            ConvexBody::monomial_body(1.5).unwrap(),
        ] {
            let ns = boundary_nodes(&body, 1.0, 1.0);
            let s: [f64; 2] = ns.nu.iter().fold([0.0, 0.0], |a, v| [a[0] + v[0], a[1] + v[1]]);
            assert!(s[0].abs() < 1e-13 && s[1].abs() < 1e-13);
            // Divergence of x/2 is 1.
            let area: f64 = ns.points.iter().zip(&ns.nu).map(|(p, v)| 0.5 * (p[0] * v[0] + p[1] * v[1])).sum();
            assert!((area - body.area).abs() < 1e-12, "{area} vs {}", body.area);
        }
    }
}
