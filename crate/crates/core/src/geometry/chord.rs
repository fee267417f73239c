//! Chords K_C(θ, λ): the section of C by the line at depth λ above the
//! supporting line with inner normal u(θ).

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::body::{ConvexBody, Variant};
use super::curve::BoundaryCurve;
use super::frame::{dot, norm, sub, Angle, Vec2};
use super::piece::Piece;
use crate::error::{domain, Result};
use crate::numeric::gauss::gauss_rule;
use crate::numeric::roots::{solve_decreasing, solve_increasing};
use crate::scalar::Scalar;

/// Slack on the depth range check, relative to the width.
const DEPTH_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordQuery<T> {
    pub theta: Angle<T>,
    pub lambda: T,
}

impl<T: Scalar> ChordQuery<T> {
    pub fn new(theta: T, lambda: T) -> Self {
        ChordQuery { theta: Angle::new(theta), lambda }
    }
}

/// Signed along-line offsets of the chord endpoints from the base point,
/// reported as nonnegative lengths; `left + right` is the chord.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiChords<T> {
    pub left: T,
    pub right: T,
}

impl<T: Scalar> SemiChords<T> {
    pub fn total(&self) -> T {
        self.left + self.right
    }
}

fn check_depth<T: Scalar>(body: &ConvexBody<T>, q: &ChordQuery<T>) -> Result<T> {
    let w = body.width(q.theta.radians());
    let slack = T::of(DEPTH_SLACK) * w;
    if !(q.lambda >= T::zero()) || q.lambda > w + slack {
        return domain(format!("depth {} outside [0, width = {}]", q.lambda, w));
    }
    Ok(w)
}

/// |K_C(θ, λ)|.
pub fn chord<T: Scalar>(body: &ConvexBody<T>, q: &ChordQuery<T>) -> Result<T> {
    let w = check_depth(body, q)?;
    let lambda = q.lambda.min(w);
    let theta = q.theta.radians();
    let u = q.theta.u();
    match &body.variant {
        Variant::Disk { radius } => {
            let r = *radius;
            Ok(T::two() * (lambda * (T::two() * r - lambda)).max(T::zero()).sqrt())
        }
        Variant::Polygon { vertices } => Ok(polygon_chord(vertices, u, lambda)),
        _ => {
            let (a, b) = chord_endpoints(body, theta, lambda)?;
            Ok(norm(sub(a, b)))
        }
    }
}

/// γ_C(θ, λ) = max(|K_C(θ, λ)|, |K_C(θ + π, λ)|).
pub fn gamma<T: Scalar>(body: &ConvexBody<T>, q: &ChordQuery<T>) -> Result<T> {
    let k1 = chord(body, q)?;
    let opp = ChordQuery { theta: q.theta.opposite(), lambda: q.lambda };
    Ok(k1.max(chord(body, &opp)?))
}

fn polygon_chord<T: Scalar>(v: &[Vec2<T>], u: Vec2<T>, lambda: T) -> T {
    let hmin = v.iter().map(|p| dot(*p, u)).fold(T::infinity(), T::min);
    let c = hmin + lambda;
    let e = [-u[1], u[0]];
    let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
    let n = v.len();
    for i in 0..n {
        let (p, q) = (v[i], v[(i + 1) % n]);
        let (gp, gq) = (dot(p, u) - c, dot(q, u) - c);
        let mut push = |x: Vec2<T>| {
            let s = dot(x, e);
            lo = lo.min(s);
            hi = hi.max(s);
        };
        if gp == T::zero() {
            push(p);
        }
        if (gp < T::zero() && gq > T::zero()) || (gp > T::zero() && gq < T::zero()) {
            let t = gp / (gp - gq);
            push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    if hi >= lo {
        hi - lo
    } else {
        T::zero()
    }
}

/// Chord endpoints on a curve-backed body: march counterclockwise and
/// clockwise from the base point to the level line.
pub fn chord_endpoints<T: Scalar>(body: &ConvexBody<T>, theta: T, lambda: T) -> Result<(Vec2<T>, Vec2<T>)> {
    let u = Angle::new(theta).u();
    let (p0, loc) = body.base_point(theta);
    let (i0, t0) = loc.expect("curve-backed body");
    let c = dot(p0, u) + lambda;
    if lambda == T::zero() {
        return Ok((p0, p0));
    }
    let (_, top) = body.base_point(theta + T::PI());
    let (i1, t1) = top.expect("curve-backed body");
    let n = body.pieces.len();
    let g = |p: &Piece<T>, t: T| dot(p.point(t), u) - c;
    let dg = |p: &Piece<T>, t: T| dot(p.velocity(t), u);
    // g rises monotonically along both arcs from the base point to the
    // top point, so each march stops at the top.
    let ahead = |p: &Piece<T>, from: T, to: T| if p.forward() { to >= from } else { to <= from };
    // Counterclockwise.
    let mut fwd = None;
    for k in 0..=n {
        let j = (i0 + k) % n;
        let p = &body.pieces[j];
        let (s, e) = p.ccw_ends();
        let s = if k == 0 { t0 } else { s };
        let last = j == i1 && (k > 0 || ahead(p, t0, t1));
        let e = if last { t1 } else { e };
        if g(p, e) >= T::zero() {
            let t = if p.forward() {
                solve_increasing(|t| g(p, t), |t| dg(p, t), T::zero(), s, e)?
            } else {
                solve_decreasing(|t| g(p, t), |t| dg(p, t), T::zero(), e, s)?
            };
            fwd = Some(p.point(t));
            break;
        }
        if last {
            fwd = Some(p.point(t1));
            break;
        }
    }
    // Clockwise.
    let mut bwd = None;
    for k in 0..=n {
        let j = (i0 + n - k % n) % n;
        let p = &body.pieces[j];
        let (s, e) = p.ccw_ends();
        let e = if k == 0 { t0 } else { e };
        let last = j == i1 && (k > 0 || ahead(p, t1, t0));
        let s = if last { t1 } else { s };
        if g(p, s) >= T::zero() {
            let t = if p.forward() {
                solve_decreasing(|t| g(p, t), |t| dg(p, t), T::zero(), s, e)?
            } else {
                solve_increasing(|t| g(p, t), |t| dg(p, t), T::zero(), e, s)?
            };
            bwd = Some(p.point(t));
            break;
        }
        if last {
            bwd = Some(p.point(t1));
            break;
        }
    }
    match (fwd, bwd) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => domain("level line does not meet the boundary"),
    }
}

/// Cumulative tangent angle and position of the open curve, obtained by
/// integrating its curvature over the arclength table.
#[derive(Debug, Clone)]
pub struct CurvatureFrame<T> {
    psi: Vec<T>,
    pos: Vec<Vec2<T>>,
    /// Segment piece and lower abscissa for interval j (samples j to j+1).
    lo: Vec<(usize, T)>,
    hi: Vec<T>,
    pieces: Vec<Piece<T>>,
}

const FRAME_NODES: usize = 16;

/// Increments (Δψ, ΔX, ΔY) across [x0, x1] on a curve with curvature
/// density `ks` (curvature times speed) and speed `sp`, starting from
/// tangent angle `psi0`; nested Gauss quadrature.
pub fn integrate_frame<T: Scalar>(ks: &impl Fn(T) -> T, sp: &impl Fn(T) -> T, x0: T, x1: T, psi0: T) -> (T, T, T) {
    let rule = gauss_rule(FRAME_NODES);
    let psi_at = |x: T| psi0 + rule.integrate(x0, x, ks);
    let (mut dx, mut dy) = (T::zero(), T::zero());
    for (x, w) in rule.mapped(x0, x1) {
        let (s, c) = psi_at(x).sin_cos();
        let v = sp(x) * w;
        dx = dx + c * v;
        dy = dy + s * v;
    }
    (rule.integrate(x0, x1, ks), dx, dy)
}

impl<T: Scalar> CurvatureFrame<T> {
    pub fn new(curve: &BoundaryCurve<T>) -> Self {
        let pieces: Vec<Piece<T>> = curve.segments.iter().map(|s| s.piece()).collect();
        let tab = &curve.arclength_table;
        let mut psi = vec![T::zero()];
        let mut pos = vec![[T::zero(); 2]];
        let mut lo = Vec::with_capacity(tab.len());
        let mut hi = Vec::with_capacity(tab.len());
        for w in tab.windows(2) {
            let seg = w[1].segment;
            let x0 = if w[0].segment == seg { w[0].x } else { curve.segments[seg].a };
            let p = &pieces[seg];
            let (dpsi, dx, dy) = integrate_frame(&|x| p.curvature(x) * p.speed(x), &|x| p.speed(x), x0, w[1].x, *psi.last().expect("seeded"));
            let last = *pos.last().expect("seeded");
            psi.push(*psi.last().expect("seeded") + dpsi);
            pos.push([last[0] + dx, last[1] + dy]);
            lo.push((seg, x0));
            hi.push(w[1].x);
        }
        CurvatureFrame { psi, pos, lo, hi, pieces }
    }

    pub fn intervals(&self) -> usize {
        self.lo.len()
    }

    pub fn total_turning(&self) -> T {
        *self.psi.last().expect("seeded")
    }

    /// (ψ, position) at abscissa x inside interval j of the unmirrored curve.
    fn at(&self, j: usize, x: T) -> (T, Vec2<T>) {
        let (seg, x0) = self.lo[j];
        let p = &self.pieces[seg];
        let (dpsi, dx, dy) = integrate_frame(&|x| p.curvature(x) * p.speed(x), &|x| p.speed(x), x0, x, self.psi[j]);
        (self.psi[j] + dpsi, [self.pos[j][0] + dx, self.pos[j][1] + dy])
    }

    fn node(&self, sign: T, j: usize) -> Vec2<T> {
        [sign * self.pos[j][0], self.pos[j][1]]
    }

    /// Locates tangent angle |psi| on the unmirrored curve.
    fn locate_angle(&self, psi: T) -> Result<(usize, T)> {
        let j = self.psi.partition_point(|v| *v <= psi);
        if j == 0 || j > self.lo.len() {
            return domain("base point outside the constructed curve; use the direct chord");
        }
        let j = j - 1;
        let (seg, x0) = self.lo[j];
        let p = &self.pieces[seg];
        let x = solve_increasing(|x| self.at(j, x).0, |x| p.curvature(x) * p.speed(x), psi, x0, self.hi[j])?;
        Ok((j, x))
    }
}

/// Semi-chords of a glued body from its curvature alone.
///
/// The base point and both endpoints must lie on the open curve and its
/// mirror image; otherwise a domain error directs to [`chord`].
pub fn chord_via_curvature<T: Scalar>(body: &ConvexBody<T>, q: &ChordQuery<T>) -> Result<SemiChords<T>> {
    let curve = match body.curve() {
        Some(c) => c,
        None => return domain("chord_via_curvature needs a glued body"),
    };
    check_depth(body, q)?;
    let frame = body_frame(body, curve);
    let scale = body.scale();
    // Tangent angle of the base point in curve coordinates.
    let mut psi_p = q.theta.radians() - T::FRAC_PI_2();
    if psi_p > T::PI() {
        psi_p = psi_p - T::TAU();
    }
    if psi_p.abs() >= frame.total_turning() {
        return domain("direction outside the constructed curve; use the direct chord");
    }
    let target = q.lambda / scale;
    let sp = if psi_p < T::zero() { -T::one() } else { T::one() };
    let (jp, xp) = if psi_p == T::zero() { (0, frame.lo[0].1) } else { frame.locate_angle(psi_p.abs())? };
    let pp = {
        let p = frame.at(jp, xp).1;
        [sp * p[0], p[1]]
    };
    let (s, c) = psi_p.sin_cos();
    let u = [-s, c];
    let e = [c, s];
    let depth = |x: Vec2<T>| dot(sub(x, pp), u);
    let along = |x: Vec2<T>| dot(sub(x, pp), e);
    if target == T::zero() {
        return Ok(SemiChords { left: T::zero(), right: T::zero() });
    }
    let nj = frame.intervals();
    // Signed node order: index J - j for mirrored node j, J + j otherwise.
    let node_at = |idx: usize| -> Vec2<T> {
        if idx >= nj {
            frame.node(T::one(), idx - nj)
        } else {
            frame.node(-T::one(), nj - idx)
        }
    };
    let point_in = |idx_lo: usize, x: T| -> Vec2<T> {
        // Interval between signed nodes idx_lo and idx_lo + 1.
        if idx_lo >= nj {
            frame.at(idx_lo - nj, x).1
        } else {
            let p = frame.at(nj - idx_lo - 1, x).1;
            [-p[0], p[1]]
        }
    };
    let interval_of = |idx_lo: usize| -> usize { if idx_lo >= nj { idx_lo - nj } else { nj - idx_lo - 1 } };
    // Signed interval holding p.
    let ip = if sp > T::zero() { nj + jp } else { nj - jp - 1 };
    let solve_in = |idx_lo: usize, xa: T, xb: T| -> Result<Vec2<T>> {
        let f = |x: T| depth(point_in(idx_lo, x));
        let (a, b) = if xa <= xb { (xa, xb) } else { (xb, xa) };
        let (fa, fb) = (f(a), f(b));
        let x = if fa <= fb {
            solve_increasing(f, |_| T::zero(), target, a, b)?
        } else {
            solve_decreasing(f, |_| T::zero(), target, a, b)?
        };
        Ok(point_in(idx_lo, x))
    };
    let bounds = |idx_lo: usize| -> (T, T) {
        let j = interval_of(idx_lo);
        (frame.lo[j].1, frame.hi[j])
    };
    // Which abscissa end of a signed interval sits at its higher node index.
    let upper_x = |idx_lo: usize| -> T {
        let (a, b) = bounds(idx_lo);
        if idx_lo >= nj {
            b
        } else {
            a
        }
    };
    let lower_x = |idx_lo: usize| -> T {
        let (a, b) = bounds(idx_lo);
        if idx_lo >= nj {
            a
        } else {
            b
        }
    };
    // Right endpoint: increasing signed order.
    let right = {
        let mut found = None;
        if depth(node_at(ip + 1)) >= target {
            found = Some(solve_in(ip, xp, upper_x(ip))?);
        } else {
            for idx in ip + 1..2 * nj {
                if depth(node_at(idx + 1)) >= target {
                    let (a, b) = bounds(idx);
                    found = Some(solve_in(idx, a, b)?);
                    break;
                }
            }
        }
        found
    };
    let left = {
        let mut found = None;
        if depth(node_at(ip)) >= target {
            found = Some(solve_in(ip, lower_x(ip), xp)?);
        } else {
            for idx in (0..ip).rev() {
                if depth(node_at(idx)) >= target {
                    let (a, b) = bounds(idx);
                    found = Some(solve_in(idx, a, b)?);
                    break;
                }
            }
        }
        found
    };
    match (left, right) {
        (Some(l), Some(r)) => Ok(SemiChords { left: -along(l) * scale, right: along(r) * scale }),
        _ => domain("chord leaves the constructed curve; use the direct chord"),
    }
}

fn body_frame<'a, T: Scalar>(body: &'a ConvexBody<T>, curve: &BoundaryCurve<T>) -> &'a CurvatureFrame<T> {
    body.frame_cache().get_or_init(|| CurvatureFrame::new(curve))
}

pub(crate) type FrameCache<T> = OnceLock<CurvatureFrame<T>>;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disk_closed_form() {
        let d = ConvexBody::disk(0.25f64).unwrap();
        assert!((chord(&d, &ChordQuery::new(1.0, 0.25)).unwrap() - 0.5).abs() < 1e-15);
        for i in 0..100 {
            let l = 0.5 * i as f64 / 99.0;
            let k = chord(&d, &ChordQuery::new(0.3 * i as f64, l)).unwrap();
            assert!((k - 2.0 * (l * (0.5 - l)).sqrt()).abs() < 1e-10);
        }
        assert!(chord(&d, &ChordQuery::new(0.0, 0.6)).is_err());
    }

    #[test]
    fn square_chord_is_constant() {
        let s = ConvexBody::square(0.5f64).unwrap();
        for l in [1e-6, 0.1, 0.25, 0.49] {
            assert!((chord(&s, &ChordQuery::new(0.0, l)).unwrap() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_curvature_frame() {
        let k = 3.0f64;
        for s in [0.01, 0.3, 1.0] {
            let (dpsi, dx, dy) = integrate_frame(&|_| k, &|_| 1.0, 0.0, s, 0.0);
            assert!((dpsi - k * s).abs() < 1e-14);
            assert!((dx - (k * s).sin() / k).abs() < 1e-13);
            assert!((dy - (1.0 - (k * s).cos()) / k).abs() < 1e-13);
        }
    }

    #[test]
    fn glued_chord_matches_curvature_route() {
        let b = ConvexBody::glued(&[1.8f64, 1.2], &[50.0, 5000.0]).unwrap();
        for (th, l) in [(0.0, 1e-6), (0.01, 1e-5), (-0.02, 3e-6), (0.0, 1e-9)] {
            let q = ChordQuery::new(PI / 2.0 + th, l);
            let direct = chord(&b, &q).unwrap();
            let via = chord_via_curvature(&b, &q).unwrap().total();
            assert!(((direct - via) / direct).abs() < 1e-6, "θ={th} λ={l}: {direct} vs {via}");
        }
    }

    #[test]
    fn central_symmetry_gives_equal_opposite_chords() {
        let b = ConvexBody::monomial_body(1.5f64).unwrap();
        for i in 0..20 {
            let th = 0.31 * i as f64;
            let w = b.width(th);
            let q = ChordQuery::new(th, 0.37 * w);
            let k = chord(&b, &q).unwrap();
            assert!((gamma(&b, &q).unwrap() - k).abs() < 1e-9);
        }
    }

    #[test]
    fn chords_reach_the_full_width() {
        let bodies = [ConvexBody::monomial_body(1.5f64).unwrap(), ConvexBody::glued(&[1.8, 1.2], &[50.0, 5000.0]).unwrap()];
        for b in &bodies {
            for i in 0..97 {
                let t = 2.0 * PI * i as f64 / 97.0;
                let w = b.width(t);
                let mut prev = f64::INFINITY;
                for f in [0.9, 0.99, 0.999, 0.9999, 1.0] {
                    let k = chord(b, &ChordQuery::new(t, f * w)).unwrap();
                    assert!(k <= prev + 1e-9, "θ={t}, f={f}: {k} after {prev}");
                    prev = k;
                }
                assert!(prev < 1e-3, "θ={t}: chord {prev} at the full width");
            }
        }
    }
}
