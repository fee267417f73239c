//! Curvature-matched chains of monomial graphs.

use serde::{Deserialize, Serialize};

use super::curvature::solve_curvature_level;
use super::frame::{norm, sub, Placement, Vec2};
use super::piece::{Piece, Shape};
use crate::error::{Error, Result};
use crate::numeric::gauss::gauss_rule;
use crate::scalar::Scalar;

/// Curvature level of the outer end of the first segment.
pub const K0: f64 = 10.0;

/// Position tolerance of the arclength table.
pub const TABLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidMotion<T> {
    pub rotation: T,
    pub translation: Vec2<T>,
}

/// Graph of x^β on [a, b] placed by a rigid motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonomialSegment<T> {
    pub beta: T,
    pub a: T,
    pub b: T,
    pub kappa_at_a: T,
    pub kappa_at_b: T,
    pub motion: RigidMotion<T>,
    /// Placed image of the high-curvature end (a, a^β).
    pub anchor: Vec2<T>,
}

impl<T: Scalar> MonomialSegment<T> {
    /// Boundary piece evaluated relative to the a-end for accuracy near it.
    pub fn piece(&self) -> Piece<T> {
        Piece {
            shape: Shape::Graph { beta: self.beta, anchor: self.a },
            t0: self.a,
            t1: self.b,
            place: Placement::rigid(self.motion.rotation, self.anchor),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArclengthSample<T> {
    pub s: T,
    pub point: Vec2<T>,
    pub tangent_angle: T,
    pub curvature: T,
    /// Index into `segments` and the abscissa on that segment.
    pub segment: usize,
    pub x: T,
}

/// Assembled curve starting at the origin with horizontal tangent; segments
/// are stored in construction order, so traversal away from the origin visits
/// them last to first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve<T> {
    pub betas: Vec<T>,
    pub ks: Vec<T>,
    pub segments: Vec<MonomialSegment<T>>,
    pub total_turning: T,
    pub arclength_table: Vec<ArclengthSample<T>>,
}

pub fn build_glued_curve<T: Scalar>(betas: &[T], ks: &[T]) -> Result<BoundaryCurve<T>> {
    if betas.is_empty() || betas.len() != ks.len() {
        return Err(Error::Degenerate("betas and ks must be nonempty and of equal length".into()));
    }
    let k0 = T::of(K0);
    if ks[0] < k0 {
        return Err(Error::Degenerate(format!("first level {} below {K0}", ks[0])));
    }
    for w in ks.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Degenerate("curvature levels must increase strictly".into()));
        }
    }
    if ks[0] == k0 {
        return Err(Error::Degenerate("first segment is empty: k_1 = k_0 forces a_1 = b_1".into()));
    }
    // Raw placements: segment 1 in its own graph coordinates, each later one
    // glued at its b-end to the a-end of its predecessor.
    let mut raw: Vec<(T, T, T, T, Placement<T>)> = Vec::with_capacity(betas.len());
    for (i, (&beta, &k)) in betas.iter().zip(ks).enumerate() {
        let k_prev = if i == 0 { k0 } else { ks[i - 1] };
        let a = solve_curvature_level(beta, k)?;
        let b = solve_curvature_level(beta, k_prev)?;
        if !(a < b) {
            return Err(Error::Gluing(format!("segment {} degenerates (a = {a}, b = {b})", i + 1)));
        }
        let place = if i == 0 {
            Placement::identity()
        } else {
            let (pa, _, pbeta, _, pplace) = raw[i - 1];
            let join = pplace.apply([pa, pa.powf(pbeta)]);
            let join_angle = pplace.rot + (pbeta * pa.powf(pbeta - T::one())).atan();
            let rot = join_angle - (beta * b.powf(beta - T::one())).atan();
            let r = Placement::rigid(rot, [T::zero(); 2]).apply([b, b.powf(beta)]);
            Placement::rigid(rot, sub(join, r))
        };
        raw.push((a, b, beta, k, place));
    }
    // Final motion: high-curvature end at the origin, tangent horizontal.
    let (a_n, _, beta_n, _, place_n) = *raw.last().expect("nonempty");
    let end = place_n.apply([a_n, a_n.powf(beta_n)]);
    let end_angle = place_n.rot + (beta_n * a_n.powf(beta_n - T::one())).atan();
    let rot_f = Placement::rigid(-end_angle, [T::zero(); 2]);
    let moved = rot_f.apply(end);
    let fin = Placement::rigid(-end_angle, [-moved[0], -moved[1]]);
    let mut segments = Vec::with_capacity(raw.len());
    for (i, &(a, b, beta, k, place)) in raw.iter().enumerate() {
        let k_prev = if i == 0 { k0 } else { ks[i - 1] };
        let total = fin.compose(&place);
        let anchor = if i + 1 == raw.len() {
            [T::zero(); 2]
        } else {
            total.apply([a, a.powf(beta)])
        };
        segments.push(MonomialSegment {
            beta,
            a,
            b,
            kappa_at_a: k,
            kappa_at_b: k_prev,
            motion: RigidMotion { rotation: total.rot, translation: total.shift },
            anchor,
        });
    }
    let mut curve = BoundaryCurve {
        betas: betas.to_vec(),
        ks: ks.to_vec(),
        segments,
        total_turning: T::zero(),
        arclength_table: Vec::new(),
    };
    let last = curve.pieces_outward().last().copied().expect("nonempty");
    curve.total_turning = last.angle(last.t1);
    curve.arclength_table = curve.build_table();
    Ok(curve)
}

impl<T: Scalar> BoundaryCurve<T> {
    /// Pieces in traversal order from the origin outward.
    pub fn pieces_outward(&self) -> Vec<Piece<T>> {
        self.segments.iter().rev().map(|s| s.piece()).collect()
    }

    /// Outer endpoint (end of segment 1).
    pub fn end_point(&self) -> Vec2<T> {
        let s = self.segments[0].piece();
        s.point(s.t1)
    }

    pub fn length(&self) -> T {
        self.arclength_table.last().map(|s| s.s).unwrap_or_else(T::zero)
    }

    fn build_table(&self) -> Vec<ArclengthSample<T>> {
        let tol = T::of(TABLE_TOL);
        let rule = gauss_rule(16);
        let mut out = Vec::new();
        let mut s = T::zero();
        let n = self.segments.len();
        for (order, piece) in self.pieces_outward().into_iter().enumerate() {
            let seg = n - 1 - order;
            let mut stack = vec![(piece.t0, piece.t1)];
            let mut accepted = Vec::new();
            while let Some((lo, hi)) = stack.pop() {
                let mid = lo + (hi - lo) * T::half();
                let pl = piece.point(lo);
                let ph = piece.point(hi);
                let pm = piece.point(mid);
                let chord_mid = [(pl[0] + ph[0]) * T::half(), (pl[1] + ph[1]) * T::half()];
                let dev = norm(sub(pm, chord_mid));
                let ratio_ok = lo > T::zero() && hi <= T::two() * lo;
                if (dev <= tol && ratio_ok) || hi - lo <= T::epsilon() * hi * T::of(16.0) {
                    accepted.push((lo, hi));
                } else {
                    stack.push((mid, hi));
                    stack.push((lo, mid));
                }
            }
            if order == 0 {
                out.push(self.sample(&piece, seg, piece.t0, s));
            }
            for (lo, hi) in accepted {
                s = s + rule.integrate(lo, hi, |t| piece.speed(t));
                out.push(self.sample(&piece, seg, hi, s));
            }
        }
        out
    }

    fn sample(&self, piece: &Piece<T>, seg: usize, x: T, s: T) -> ArclengthSample<T> {
        ArclengthSample {
            s,
            point: piece.point(x),
            tangent_angle: piece.angle(x),
            curvature: piece.curvature(x),
            segment: seg,
            x,
        }
    }

    /// Junction defects (relative curvature jump, tangent-angle jump, gap)
    /// between consecutive segments in traversal order.
    pub fn junction_defects(&self) -> Vec<(T, T, T)> {
        let pieces = self.pieces_outward();
        pieces
            .windows(2)
            .map(|w| {
                let (p, q) = (&w[0], &w[1]);
                let k1 = p.curvature(p.t1);
                let k2 = q.curvature(q.t0);
                let dk = (k1 - k2).abs() / k1.max(k2);
                let da = (p.angle(p.t1) - q.angle(q.t0)).abs();
                let gap = norm(sub(p.point(p.t1), q.point(q.t0)));
                (dk, da, gap)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curvature::kappa;

    #[test]
    fn single_segment_endpoint_curvatures() {
        let c = build_glued_curve(&[1.5f64], &[100.0]).unwrap();
        let s = &c.segments[0];
        assert!((kappa(1.5, s.a) - 100.0).abs() / 100.0 < 1e-10);
        assert!((kappa(1.5, s.b) - 10.0).abs() / 10.0 < 1e-10);
        let p = s.piece();
        let o = p.point(p.t0);
        assert!(o[0].abs() < 1e-18 && o[1].abs() < 1e-18);
        assert!(p.angle(p.t0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_first_segment() {
        assert!(matches!(build_glued_curve(&[1.5f64], &[10.0]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn two_segment_junctions() {
        let c = build_glued_curve(&[1.8f64, 1.2], &[50.0, 5000.0]).unwrap();
        for (dk, da, gap) in c.junction_defects() {
            assert!(dk <= 1e-8, "curvature jump {dk:e}");
            assert!(da <= 1e-10, "tangent jump {da:e}");
            assert!(gap <= 1e-15, "gap {gap:e}");
        }
        let tab = &c.arclength_table;
        assert!(tab.windows(2).all(|w| w[1].s > w[0].s));
        assert!(tab.windows(2).all(|w| w[1].curvature < w[0].curvature));
        assert!(tab.windows(2).all(|w| w[1].tangent_angle > w[0].tangent_angle));
    }
}
