//! Convex bodies: polygons, disks, closed monomial bodies and closed glued
//! bodies. Smooth variants are stored as counterclockwise lists of pieces in
//! final (scaled) coordinates.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::chord::FrameCache;
use super::curvature::monomial_curvature;
use super::curve::{build_glued_curve, BoundaryCurve, K0};
use super::frame::{dot, norm, sub, Angle, Placement, Vec2};
use super::piece::{Piece, Shape};
use super::window::Windows;
use crate::error::{domain, Error, Result};
use crate::numeric::gauss::gauss_rule;
use crate::scalar::Scalar;

/// Diameter after the final uniform scaling; kept a hair below 1 so that
/// rounding never pushes it over.
pub const TARGET_DIAMETER: f64 = 1.0 - 1e-12;

/// Closing arcs have curvature k_0.
pub const ARC_RADIUS: f64 = 1.0 / K0;

/// Membership index resolution: tangent turning and length per sample edge.
const INDEX_TURN: f64 = 1.0 / 512.0;
const INDEX_LEN: f64 = 1.0 / 2048.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Variant<T> {
    Polygon { vertices: Vec<Vec2<T>> },
    Disk { radius: T },
    MonomialBody { beta: T },
    GluedBody { curve: BoundaryCurve<T> },
}

/// Closure data of the smooth variants, in unscaled construction coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Closure<T> {
    pub arc_radius: T,
    /// Outer end of the open curve and its tangent angle.
    pub end_point: Vec2<T>,
    pub end_angle: T,
    /// Arc center on the right and the point-reflection center.
    pub arc_center: Vec2<T>,
    pub reflection_center: Vec2<T>,
    /// Turning of each closing arc.
    pub arc_turning: T,
    pub scale: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample<T> {
    pub s: T,
    pub x: T,
    pub y: T,
    pub tangent_angle: T,
    pub curvature: T,
}

#[derive(Debug, Clone)]
struct IndexEdge<T> {
    polar: T,
    point: Vec2<T>,
    piece: usize,
    t: T,
}

#[derive(Debug, Clone, Default)]
struct MembershipIndex<T> {
    edges: Vec<IndexEdge<T>>,
    /// Max distance between each sample edge and its boundary arc.
    sag: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct ConvexBody<T> {
    pub variant: Variant<T>,
    pub closure: Option<Closure<T>>,
    /// Counterclockwise boundary pieces (empty for polygons and disks).
    pub pieces: Vec<Piece<T>>,
    pub area: T,
    pub diameter: T,
    /// Interior reference point; the symmetry center when `central`.
    pub center: Vec2<T>,
    pub central: bool,
    /// Mirror symmetric about the vertical line through `center`.
    pub axis: bool,
    /// Symmetric under the swap of coordinates about `center`.
    pub diagonal: bool,
    pub windows: Option<Windows<T>>,
    index: MembershipIndex<T>,
    frame: FrameCache<T>,
}

/// Serialized form of a body: defining parameters, closure, windows and a
/// content fingerprint. Loading rebuilds the body from the parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodyDocument {
    pub variant: String,
    pub parameters: serde_json::Value,
    pub closure: Option<Closure<f64>>,
    pub scale: f64,
    pub area: f64,
    pub diameter: f64,
    pub central: bool,
    pub axis: bool,
    pub windows: Option<Windows<f64>>,
    pub fingerprint: String,
}

fn cross<T: Scalar>(a: Vec2<T>, b: Vec2<T>) -> T {
    a[0] * b[1] - a[1] * b[0]
}

impl<T: Scalar> ConvexBody<T> {
    /// Convex polygon from counterclockwise vertices.
    pub fn polygon(vertices: Vec<Vec2<T>>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return domain("polygon needs at least three vertices");
        }
        for i in 0..n {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            if !(cross(sub(b, a), sub(c, b)) > T::zero()) {
                return Err(Error::Convexity(format!("vertex {} is not strictly convex counterclockwise", (i + 1) % n)));
            }
        }
        let area = shoelace(&vertices);
        let mut diameter = T::zero();
        for a in &vertices {
            for b in &vertices {
                diameter = diameter.max(norm(sub(*a, *b)));
            }
        }
        let nf = T::of(n as f64);
        let center = [
            vertices.iter().fold(T::zero(), |s, v| s + v[0]) / nf,
            vertices.iter().fold(T::zero(), |s, v| s + v[1]) / nf,
        ];
        let tol = T::of(1e-12) * diameter;
        let central = n % 2 == 0 && {
            let c0 = [vertices[0][0] + vertices[n / 2][0], vertices[0][1] + vertices[n / 2][1]];
            (0..n).all(|i| {
                let j = (i + n / 2) % n;
                (vertices[i][0] + vertices[j][0] - c0[0]).abs() <= tol
                    && (vertices[i][1] + vertices[j][1] - c0[1]).abs() <= tol
            })
        };
        let axis = vertices.iter().all(|v| {
            let m = [T::two() * center[0] - v[0], v[1]];
            vertices.iter().any(|w| norm(sub(*w, m)) <= tol)
        });
        let diagonal = vertices.iter().all(|v| {
            let m = [center[0] + v[1] - center[1], center[1] + v[0] - center[0]];
            vertices.iter().any(|w| norm(sub(*w, m)) <= tol)
        });
        Ok(ConvexBody {
            variant: Variant::Polygon { vertices },
            closure: None,
            pieces: Vec::new(),
            area,
            diameter,
            center,
            central,
            axis,
            diagonal,
            windows: None,
            index: MembershipIndex::default(),
            frame: FrameCache::new(),
        })
    }

    /// Axis-aligned square [0, s]².
    pub fn square(side: T) -> Result<Self> {
        let z = T::zero();
        Self::polygon(vec![[z, z], [side, z], [side, side], [z, side]])
    }

    /// Disk of radius `r` centered at the origin.
    pub fn disk(radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return domain(format!("disk radius {radius} must be positive"));
        }
        Ok(ConvexBody {
            variant: Variant::Disk { radius },
            closure: None,
            pieces: Vec::new(),
            area: T::PI() * radius * radius,
            diameter: T::two() * radius,
            center: [T::zero(); 2],
            central: true,
            axis: true,
            diagonal: true,
            windows: None,
            index: MembershipIndex::default(),
            frame: FrameCache::new(),
        })
    }

    /// Graph of |x|^β on [−1, 1] closed by curvature-matched arcs and a point
    /// reflection, scaled to diameter 1.
    pub fn monomial_body(beta: T) -> Result<Self> {
        let k1 = monomial_curvature(beta, T::one())?;
        if beta >= T::two() {
            return domain("monomial body needs beta < 2");
        }
        let graph = Piece {
            shape: Shape::Graph { beta, anchor: T::zero() },
            t0: T::zero(),
            t1: T::one(),
            place: Placement::identity(),
        };
        Self::close(Variant::MonomialBody { beta }, vec![graph], T::one() / k1)
    }

    /// Closes an assembled curve: mirror image, arcs of radius 1/k_0, point
    /// reflection, scaling.
    pub fn close_body(curve: BoundaryCurve<T>) -> Result<Self> {
        let pieces = curve.pieces_outward();
        Self::close(Variant::GluedBody { curve }, pieces, T::of(ARC_RADIUS))
    }

    /// Glued body from exponents and curvature levels.
    pub fn glued(betas: &[T], ks: &[T]) -> Result<Self> {
        Self::close_body(build_glued_curve(betas, ks)?)
    }

    fn close(variant: Variant<T>, outward: Vec<Piece<T>>, radius: T) -> Result<Self> {
        let last = *outward.last().expect("nonempty");
        let end_point = last.point(last.t1);
        let end_angle = last.angle(last.t1);
        let half_pi = T::FRAC_PI_2();
        if !(end_angle > T::zero() && end_angle < half_pi) {
            return Err(Error::Convexity(format!("open curve turns {end_angle}, outside (0, π/2)")));
        }
        for p in &outward {
            let (a, b) = (p.curvature(p.t0), p.curvature(p.t1));
            if !(a > T::zero() && b > T::zero()) {
                return Err(Error::Convexity("nonpositive curvature on the open curve".into()));
            }
        }
        let (s, c) = end_angle.sin_cos();
        let arc_center = [end_point[0] - radius * s, end_point[1] + radius * c];
        if !(arc_center[0] + radius > T::zero()) {
            return Err(Error::Convexity("closing arc does not reach past the axis".into()));
        }
        let arc = Piece {
            shape: Shape::Arc { radius },
            t0: end_angle,
            t1: half_pi,
            place: Placement::rigid(T::zero(), arc_center),
        };
        // Lower half, counterclockwise from the left vertical tangent point.
        let mirror = Placement::mirror();
        let mut lower = vec![arc.placed(&mirror)];
        lower.extend(outward.iter().rev().map(|p| p.placed(&mirror)));
        lower.extend(outward.iter().copied());
        lower.push(arc);
        let reflection_center = [T::zero(), arc_center[1]];
        let pr = Placement::point_reflection(reflection_center);
        let mut all = lower.clone();
        all.extend(lower.iter().map(|p| p.placed(&pr)));
        // Unscaled diameter: central symmetry makes it twice the max distance
        // to the center, attained on a vertical tangent point or on a piece.
        let d0 = T::two() * max_distance(&all, reflection_center);
        let scale = T::of(TARGET_DIAMETER) / d0;
        let sc = Placement::scaling(scale);
        let pieces: Vec<Piece<T>> = all.iter().map(|p| p.placed(&sc)).collect();
        let center = [T::zero(), reflection_center[1] * scale];
        let closure = Closure {
            arc_radius: radius,
            end_point,
            end_angle,
            arc_center,
            reflection_center,
            arc_turning: half_pi - end_angle,
            scale,
        };
        let mut body = ConvexBody {
            variant,
            closure: Some(closure),
            area: T::zero(),
            diameter: T::two() * max_distance(&pieces, center),
            pieces,
            center,
            central: true,
            axis: true,
            diagonal: false,
            windows: None,
            index: MembershipIndex::default(),
            frame: FrameCache::new(),
        };
        body.area = body.pieces.iter().map(piece_area).fold(T::zero(), |a, b| a + b);
        body.index = build_index(&body.pieces, center);
        Ok(body)
    }

    pub(crate) fn frame_cache(&self) -> &FrameCache<T> {
        &self.frame
    }

    pub fn is_curve_backed(&self) -> bool {
        !self.pieces.is_empty()
    }

    pub fn scale(&self) -> T {
        self.closure.map(|c| c.scale).unwrap_or_else(T::one)
    }

    pub fn curve(&self) -> Option<&BoundaryCurve<T>> {
        match &self.variant {
            Variant::GluedBody { curve } => Some(curve),
            _ => None,
        }
    }

    /// Support function h(θ) = max x·u(θ).
    pub fn support(&self, theta: T) -> T {
        let u = Angle::new(theta).u();
        match &self.variant {
            Variant::Polygon { vertices } => vertices.iter().map(|v| dot(*v, u)).fold(T::neg_infinity(), T::max),
            Variant::Disk { radius } => *radius,
            _ => {
                let psi = theta + T::FRAC_PI_2();
                self.pieces
                    .iter()
                    .map(|p| dot(p.point(p.param_for_angle(psi)), u))
                    .fold(T::neg_infinity(), T::max)
            }
        }
    }

    /// Boundary point minimizing x·u(θ) and its piece location (smooth
    /// variants only report the location).
    pub fn base_point(&self, theta: T) -> (Vec2<T>, Option<(usize, T)>) {
        let u = Angle::new(theta).u();
        match &self.variant {
            Variant::Polygon { vertices } => {
                let v = vertices
                    .iter()
                    .copied()
                    .min_by(|a, b| dot(*a, u).partial_cmp(&dot(*b, u)).expect("finite"))
                    .expect("nonempty");
                (v, None)
            }
            Variant::Disk { radius } => ([-*radius * u[0], -*radius * u[1]], None),
            _ => {
                let psi = theta - T::FRAC_PI_2();
                let mut best = (T::infinity(), [T::zero(); 2], 0usize, T::zero());
                for (i, p) in self.pieces.iter().enumerate() {
                    let t = p.param_for_angle(psi);
                    let x = p.point(t);
                    let h = dot(x, u);
                    if h < best.0 {
                        best = (h, x, i, t);
                    }
                }
                (best.1, Some((best.2, best.3)))
            }
        }
    }

    /// Lower-left and upper-right corners of the bounding box.
    pub fn bounding_box(&self) -> (Vec2<T>, Vec2<T>) {
        match &self.variant {
            Variant::Polygon { vertices } => {
                let (mut lo, mut hi) = ([T::infinity(); 2], [T::neg_infinity(); 2]);
                for v in vertices {
                    for k in 0..2 {
                        lo[k] = lo[k].min(v[k]);
                        hi[k] = hi[k].max(v[k]);
                    }
                }
                (lo, hi)
            }
            Variant::Disk { radius } => ([-*radius, -*radius], [*radius, *radius]),
            _ => {
                let h = T::FRAC_PI_2();
                let lo = [-self.support(T::PI()), -self.support(T::PI() + h)];
                (lo, [self.support(T::zero()), self.support(h)])
            }
        }
    }

    pub fn width(&self, theta: T) -> T {
        self.support(theta) + self.support(theta + T::PI())
    }

    /// Point membership (closed body).
    pub fn contains(&self, p: Vec2<T>) -> bool {
        match &self.variant {
            Variant::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| cross(sub(vertices[(i + 1) % n], vertices[i]), sub(p, vertices[i])) >= T::zero())
            }
            Variant::Disk { radius } => p[0] * p[0] + p[1] * p[1] <= *radius * *radius,
            _ => self.contains_smooth(p),
        }
    }

    fn contains_smooth(&self, p: Vec2<T>) -> bool {
        let idx = &self.index;
        let d = sub(p, self.center);
        if d[0] == T::zero() && d[1] == T::zero() {
            return true;
        }
        let phi = d[1].atan2(d[0]).modulo(T::TAU());
        let n = idx.edges.len();
        // Edges are sorted by polar angle starting from the smallest.
        let j = match idx.edges.binary_search_by(|e| e.polar.partial_cmp(&phi).expect("finite")) {
            Ok(j) => j,
            Err(0) => n,
            Err(j) => j,
        };
        let (ia, ib) = ((j + n - 1) % n, j % n);
        let (a, b) = (&idx.edges[ia], &idx.edges[ib]);
        let side = cross(sub(b.point, a.point), sub(p, a.point));
        let len = norm(sub(b.point, a.point));
        if side >= T::zero() {
            return true;
        }
        if -side > (idx.sag[ia] * T::of(1.5) + T::of(1e-15)) * len {
            return false;
        }
        // Exact ray intersection on the piece carrying this edge.
        let piece = &self.pieces[a.piece];
        let other = if b.piece == a.piece { b.t } else { piece.ccw_ends().1 };
        let (mut lo, mut hi) = if a.t <= other { (a.t, other) } else { (other, a.t) };
        let f = |t: T| cross(d, sub(piece.point(t), self.center));
        let (flo, fhi) = (f(lo), f(hi));
        if flo.signum() == fhi.signum() {
            let q = if flo.abs() < fhi.abs() { lo } else { hi };
            return norm(d) <= norm(sub(piece.point(q), self.center));
        }
        for _ in 0..200 {
            let m = lo + (hi - lo) * T::half();
            if m <= lo || m >= hi {
                break;
            }
            if f(m).signum() == flo.signum() {
                lo = m;
            } else {
                hi = m;
            }
        }
        let q = piece.point(lo + (hi - lo) * T::half());
        norm(d) <= norm(sub(q, self.center))
    }

    /// Boundary samples in counterclockwise order with cumulative arclength.
    pub fn boundary_samples(&self, count: usize) -> Vec<BoundarySample<T>> {
        let count = count.max(8);
        let mut out = Vec::with_capacity(count + 8);
        match &self.variant {
            Variant::Polygon { vertices } => {
                let n = vertices.len();
                let mut s = T::zero();
                for i in 0..=n {
                    let v = vertices[i % n];
                    let w = vertices[(i + 1) % n];
                    let e = sub(w, v);
                    out.push(BoundarySample { s, x: v[0], y: v[1], tangent_angle: e[1].atan2(e[0]), curvature: T::zero() });
                    s = s + norm(e);
                }
            }
            Variant::Disk { radius } => {
                for i in 0..=count {
                    let t = T::TAU() * T::of(i as f64 / count as f64);
                    let (sn, cs) = t.sin_cos();
                    out.push(BoundarySample {
                        s: *radius * t,
                        x: *radius * cs,
                        y: *radius * sn,
                        tangent_angle: t + T::FRAC_PI_2(),
                        curvature: T::one() / *radius,
                    });
                }
            }
            _ => {
                let lens: Vec<T> = self.pieces.iter().map(|p| p.arclength()).collect();
                let total = lens.iter().fold(T::zero(), |a, b| a + *b);
                let mut s = T::zero();
                for (p, l) in self.pieces.iter().zip(&lens) {
                    let k = ((*l / total).f64() * count as f64).ceil().max(2.0) as usize;
                    let (start, end) = p.ccw_ends();
                    let mut prev = start;
                    let mut acc = s;
                    for i in 0..k {
                        let t = start + (end - start) * T::of(i as f64 / k as f64);
                        if i > 0 {
                            acc = acc + if p.forward() { p.arclength_between(prev, t) } else { p.arclength_between(t, prev) };
                        }
                        prev = t;
                        let x = p.point(t);
                        out.push(BoundarySample { s: acc, x: x[0], y: x[1], tangent_angle: p.angle(t), curvature: p.curvature(t) });
                    }
                    s = s + *l;
                }
                let p = self.pieces[0];
                let t = p.ccw_ends().0;
                let x = p.point(t);
                out.push(BoundarySample { s, x: x[0], y: x[1], tangent_angle: p.angle(t) + T::TAU(), curvature: p.curvature(t) });
            }
        }
        out
    }

    /// Closed-curve diagnostics: (total turning, closure gap) from
    /// integrating curvature and the tangent along the boundary.
    pub fn closure_defects(&self) -> (T, T) {
        let rule = gauss_rule(24);
        let mut turning = T::zero();
        let mut disp = [T::zero(); 2];
        for p in &self.pieces {
            for w in p.base_breaks().windows(2) {
                turning = turning + rule.integrate(w[0], w[1], |t| p.curvature(t) * p.speed(t));
                disp[0] = disp[0] + rule.integrate(w[0], w[1], |t| p.velocity(t)[0]);
                disp[1] = disp[1] + rule.integrate(w[0], w[1], |t| p.velocity(t)[1]);
            }
        }
        (turning, norm(disp))
    }

    /// Tangent angle continuity and position gaps at piece junctions.
    pub fn junction_defects(&self) -> Vec<(T, T, T)> {
        let n = self.pieces.len();
        (0..n)
            .map(|i| {
                let (p, q) = (&self.pieces[i], &self.pieces[(i + 1) % n]);
                let (_, pe) = p.ccw_ends();
                let (qs, _) = q.ccw_ends();
                let da = (p.angle(pe) - q.angle(qs)).modulo(T::TAU());
                let da = da.min(T::TAU() - da);
                let (k1, k2) = (p.curvature(pe), q.curvature(qs));
                let dk = (k1 - k2).abs() / k1.max(k2);
                (dk, da, norm(sub(p.point(pe), q.point(qs))))
            })
            .collect()
    }

    fn variant_tag(&self) -> &'static str {
        match self.variant {
            Variant::Polygon { .. } => "polygon",
            Variant::Disk { .. } => "disk",
            Variant::MonomialBody { .. } => "monomial_body",
            Variant::GluedBody { .. } => "glued_body",
        }
    }

    /// Defining parameters only (what a rebuild needs).
    pub fn parameters(&self) -> serde_json::Value {
        match &self.variant {
            Variant::Polygon { vertices } => {
                let v: Vec<[f64; 2]> = vertices.iter().map(|p| [p[0].f64(), p[1].f64()]).collect();
                serde_json::json!({ "vertices": v })
            }
            Variant::Disk { radius } => serde_json::json!({ "radius": radius.f64() }),
            Variant::MonomialBody { beta } => serde_json::json!({ "beta": beta.f64() }),
            Variant::GluedBody { curve } => {
                let betas: Vec<f64> = curve.betas.iter().map(|b| b.f64()).collect();
                let ks: Vec<f64> = curve.ks.iter().map(|k| k.f64()).collect();
                let segs: Vec<serde_json::Value> = curve
                    .segments
                    .iter()
                    .map(|s| {
                        serde_json::json!({
                            "beta": s.beta.f64(), "a": s.a.f64(), "b": s.b.f64(),
                            "kappa_at_a": s.kappa_at_a.f64(), "kappa_at_b": s.kappa_at_b.f64(),
                            "rotation": s.motion.rotation.f64(),
                            "translation": [s.motion.translation[0].f64(), s.motion.translation[1].f64()],
                        })
                    })
                    .collect();
                serde_json::json!({ "betas": betas, "ks": ks, "segments": segs })
            }
        }
    }

    /// SHA-256 of the canonical JSON of variant tag and defining parameters.
    pub fn fingerprint(&self) -> String {
        let canon = match &self.variant {
            Variant::GluedBody { curve } => {
                let betas: Vec<f64> = curve.betas.iter().map(|b| b.f64()).collect();
                let ks: Vec<f64> = curve.ks.iter().map(|k| k.f64()).collect();
                serde_json::json!({ "variant": self.variant_tag(), "betas": betas, "ks": ks })
            }
            _ => serde_json::json!({ "variant": self.variant_tag(), "parameters": self.parameters() }),
        };
        let mut h = Sha256::new();
        h.update(canon.to_string().as_bytes());
        hex::encode(h.finalize())
    }

    pub fn to_document(&self) -> BodyDocument {
        BodyDocument {
            variant: self.variant_tag().to_string(),
            parameters: self.parameters(),
            closure: self.closure.map(|c| Closure {
                arc_radius: c.arc_radius.f64(),
                end_point: [c.end_point[0].f64(), c.end_point[1].f64()],
                end_angle: c.end_angle.f64(),
                arc_center: [c.arc_center[0].f64(), c.arc_center[1].f64()],
                reflection_center: [c.reflection_center[0].f64(), c.reflection_center[1].f64()],
                arc_turning: c.arc_turning.f64(),
                scale: c.scale.f64(),
            }),
            scale: self.scale().f64(),
            area: self.area.f64(),
            diameter: self.diameter.f64(),
            central: self.central,
            axis: self.axis,
            windows: self.windows.as_ref().map(Windows::to_f64),
            fingerprint: self.fingerprint(),
        }
    }

    /// Rebuilds a body from its document and checks the fingerprint.
    pub fn from_document(doc: &BodyDocument) -> Result<Self> {
        let p = &doc.parameters;
        let num = |v: &serde_json::Value| v.as_f64().ok_or_else(|| Error::Format("expected a number".into()));
        let list = |key: &str| -> Result<Vec<T>> {
            p[key]
                .as_array()
                .ok_or_else(|| Error::Format(format!("missing array {key}")))?
                .iter()
                .map(|v| num(v).map(T::of))
                .collect()
        };
        let mut body = match doc.variant.as_str() {
            "polygon" => {
                let vs = p["vertices"].as_array().ok_or_else(|| Error::Format("missing vertices".into()))?;
                let mut v = Vec::with_capacity(vs.len());
                for q in vs {
                    v.push([T::of(num(&q[0])?), T::of(num(&q[1])?)]);
                }
                Self::polygon(v)?
            }
            "disk" => Self::disk(T::of(num(&p["radius"])?))?,
            "monomial_body" => Self::monomial_body(T::of(num(&p["beta"])?))?,
            "glued_body" => Self::glued(&list("betas")?, &list("ks")?)?,
            other => return Err(Error::Format(format!("unknown body variant {other}"))),
        };
        if body.fingerprint() != doc.fingerprint {
            return Err(Error::Format("body fingerprint mismatch".into()));
        }
        body.windows = doc.windows.as_ref().map(Windows::from_f64);
        Ok(body)
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let s = serde_json::to_string_pretty(&self.to_document()).map_err(|e| Error::Format(e.to_string()))?;
        crate::io::atomic_write(path, s.as_bytes())
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let s = fs::read_to_string(path)?;
        let doc: BodyDocument = serde_json::from_str(&s).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_document(&doc)
    }

    /// Boundary CSV with columns s, x, y, tangent_angle, curvature.
    pub fn write_boundary_csv(&self, path: &Path, count: usize) -> Result<()> {
        let mut buf = Vec::new();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(["s", "x", "y", "tangent_angle", "curvature"]).map_err(csv_err)?;
            for b in self.boundary_samples(count) {
                w.write_record(&[b.s, b.x, b.y, b.tangent_angle, b.curvature].map(|v| format!("{:e}", v.f64())))
                    .map_err(csv_err)?;
            }
            w.flush()?;
        }
        crate::io::atomic_write(path, &buf)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

fn shoelace<T: Scalar>(v: &[Vec2<T>]) -> T {
    let n = v.len();
    let mut a = T::zero();
    for i in 0..n {
        a = a + cross(v[i], v[(i + 1) % n]);
    }
    a * T::half()
}

/// ½∮(x dy − y dx) over one piece in counterclockwise orientation.
fn piece_area<T: Scalar>(p: &Piece<T>) -> T {
    let rule = gauss_rule(32);
    let sgn = if p.forward() { T::one() } else { -T::one() };
    let mut acc = T::zero();
    for w in p.base_breaks().windows(2) {
        acc = acc + rule.integrate(w[0], w[1], |t| cross(p.point(t), p.velocity(t)));
    }
    acc * sgn * T::half()
}

/// Max distance from `c` to the pieces: sample each piece, then refine the
/// best samples by golden-section search.
fn max_distance<T: Scalar>(pieces: &[Piece<T>], c: Vec2<T>) -> T {
    let mut best = T::zero();
    for p in pieces {
        let br = p.base_breaks();
        for w in br.windows(2) {
            let k = 16;
            let d = |t: T| norm(sub(p.point(t), c));
            let mut bi = 0;
            let mut bv = T::neg_infinity();
            for i in 0..=k {
                let t = w[0] + (w[1] - w[0]) * T::of(i as f64 / k as f64);
                let v = d(t);
                if v > bv {
                    bv = v;
                    bi = i;
                }
            }
            let h = (w[1] - w[0]) / T::of(k as f64);
            let lo = (w[0] + h * T::of(bi as f64) - h).max(w[0]);
            let hi = (w[0] + h * T::of(bi as f64) + h).min(w[1]);
            best = best.max(golden_max(lo, hi, d)).max(bv);
        }
    }
    best
}

pub(crate) fn golden_max<T: Scalar>(mut a: T, mut b: T, f: impl Fn(T) -> T) -> T {
    let g = T::of(0.618_033_988_749_894_9);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..100 {
        if b - a <= T::epsilon() * (a.abs() + b.abs()) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    f1.max(f2).max(f(a)).max(f(b))
}

fn build_index<T: Scalar>(pieces: &[Piece<T>], center: Vec2<T>) -> MembershipIndex<T> {
    let turn = T::of(INDEX_TURN);
    let len_cap = T::of(INDEX_LEN);
    let mut edges: Vec<IndexEdge<T>> = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        let breaks = p.base_breaks();
        let mut ts = vec![breaks[0]];
        for w in breaks.windows(2) {
            let mut stack = vec![(w[0], w[1])];
            let mut acc = Vec::new();
            while let Some((lo, hi)) = stack.pop() {
                let dturn = (p.angle(hi) - p.angle(lo)).abs();
                let dlen = norm(sub(p.point(hi), p.point(lo)));
                let tiny = hi - lo <= T::of(64.0) * T::epsilon() * hi.abs().max(T::min_positive_value());
                if (dturn <= turn && dlen <= len_cap) || tiny {
                    acc.push(hi);
                } else {
                    let m = lo + (hi - lo) * T::half();
                    stack.push((m, hi));
                    stack.push((lo, m));
                }
            }
            ts.extend(acc);
        }
        if !p.forward() {
            ts.reverse();
        }
        ts.pop();
        for t in ts {
            let x = p.point(t);
            let d = sub(x, center);
            edges.push(IndexEdge { polar: d[1].atan2(d[0]).modulo(T::TAU()), point: x, piece: i, t });
        }
    }
    let start = edges
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.polar.partial_cmp(&b.1.polar).expect("finite"))
        .map(|(i, _)| i)
        .unwrap_or(0);
    edges.rotate_left(start);
    let n = edges.len();
    let sag = (0..n)
        .map(|j| {
            let (a, b) = (&edges[j], &edges[(j + 1) % n]);
            let p = &pieces[a.piece];
            let hi_t = if b.piece == a.piece { b.t } else { p.ccw_ends().1 };
            let chord = sub(b.point, a.point);
            let len = norm(chord).max(T::min_positive_value());
            let mut m = T::zero();
            for k in 1..8 {
                let t = a.t + (hi_t - a.t) * T::of(k as f64 / 8.0);
                let dev = -cross(chord, sub(p.point(t), a.point)) / len;
                m = m.max(dev.abs());
            }
            m
        })
        .collect();
    MembershipIndex { edges, sag }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_support_and_width() {
        let s = ConvexBody::square(0.5f64).unwrap();
        assert!((s.area - 0.25).abs() < 1e-15);
        assert!(s.central && s.axis);
        assert!((s.width(0.0) - 0.5).abs() < 1e-15);
        assert!(s.contains([0.25, 0.25]) && !s.contains([0.6, 0.1]));
    }

    #[test]
    fn monomial_body_is_closed_and_symmetric() {
        let b = ConvexBody::monomial_body(1.5f64).unwrap();
        let (turn, gap) = b.closure_defects();
        assert!((turn - std::f64::consts::TAU).abs() < 1e-9, "turning {turn}");
        assert!(gap < 1e-9 * b.diameter, "gap {gap:e}");
        assert!(b.diameter <= 1.0);
        for (dk, da, g) in b.junction_defects() {
            assert!(da < 1e-10 && g < 1e-12);
            assert!(dk < 1e-8 || dk.is_nan(), "curvature jump {dk:e}");
        }
        for i in 0..64 {
            let th = i as f64 * 0.1;
            assert!((b.support(th) - (b.support(th + std::f64::consts::PI) + 2.0 * dot(b.center, Angle::new(th).u()))).abs() < 1e-10);
        }
    }

    #[test]
    fn boundary_nudges_classify_correctly() {
        let b = ConvexBody::glued(&[1.8f64, 1.2], &[50.0, 5000.0]).unwrap();
        for s in b.boundary_samples(400) {
            let x = [s.x, s.y];
            let n = [s.tangent_angle.sin(), -s.tangent_angle.cos()];
            assert!(b.contains([x[0] - 1e-9 * n[0], x[1] - 1e-9 * n[1]]));
            assert!(!b.contains([x[0] + 1e-9 * n[0], x[1] + 1e-9 * n[1]]));
        }
    }

    #[test]
    fn disk_area_via_pieces_matches() {
        // A monomial body with β near 2 is close to a parabola-capped shape;
        // check area through the Green formula agrees with a fine polygon.
        let b = ConvexBody::monomial_body(1.9f64).unwrap();
        let s = b.boundary_samples(20000);
        let v: Vec<Vec2<f64>> = s[..s.len() - 1].iter().map(|q| [q.x, q.y]).collect();
        let poly = shoelace(&v);
        assert!((poly - b.area).abs() < 1e-6 * b.area);
    }
}
