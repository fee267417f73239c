//! Empirical window constants and the factor-2 chord comparison.

use serde::{Deserialize, Serialize};

use super::body::{ConvexBody, Variant};
use super::chord::{chord, ChordQuery};
use super::frame::{dot, sub, Angle};
use crate::error::{domain, Result};
use crate::scalar::Scalar;

/// Safety factor applied to every scanned window constant.
pub const SAFETY: f64 = 2.0;
/// Ratio bound of the chord comparison.
pub const RATIO_BOUND: f64 = 2.0;
const SCAN_GRID: usize = 32;
const WIDTH_GRID: usize = 720;

/// Window constants of a body. Angles are offsets from the flat normal
/// direction π/2 except `tec1_theta0`, which is a body angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Windows<T> {
    pub tec1_theta0: T,
    pub tec1_lambda0: T,
    pub aux_c: T,
    pub aux_lambda: T,
    pub lambda_c: T,
    /// Always true: the constants are scanned, not derived.
    pub estimated: bool,
}

impl<T: Scalar> Windows<T> {
    pub fn to_f64(&self) -> Windows<f64> {
        Windows {
            tec1_theta0: self.tec1_theta0.f64(),
            tec1_lambda0: self.tec1_lambda0.f64(),
            aux_c: self.aux_c.f64(),
            aux_lambda: self.aux_lambda.f64(),
            lambda_c: self.lambda_c.f64(),
            estimated: self.estimated,
        }
    }

    pub fn from_f64(w: &Windows<f64>) -> Self {
        Windows {
            tec1_theta0: T::of(w.tec1_theta0),
            tec1_lambda0: T::of(w.tec1_lambda0),
            aux_c: T::of(w.aux_c),
            aux_lambda: T::of(w.aux_lambda),
            lambda_c: T::of(w.lambda_c),
            estimated: w.estimated,
        }
    }
}

/// Radial and angular range where the spectral weight follows the β_i law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeWindow {
    pub index: usize,
    pub beta: f64,
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub theta_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub max_ratio: f64,
    pub pairs: usize,
    /// (θ₁, θ₂, λ, ratio) with ratio above the bound.
    pub violations: Vec<(f64, f64, f64, f64)>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks |K(θ₁, λ)| ≤ 2|K(θ₂, λ)| for all grid pairs θ₁ < θ₂.
pub fn check_chord_monotonicity<T: Scalar>(body: &ConvexBody<T>, thetas: &[T], lambdas: &[T]) -> Result<MonotonicityReport> {
    let mut report = MonotonicityReport { max_ratio: 1.0, pairs: 0, violations: Vec::new() };
    for &l in lambdas {
        let ks: Vec<T> = thetas.iter().map(|&t| chord(body, &ChordQuery::new(t, l))).collect::<Result<_>>()?;
        for i in 0..thetas.len() {
            for j in i..thetas.len() {
                if !(thetas[i] <= thetas[j]) {
                    continue;
                }
                report.pairs += 1;
                let r = if ks[i] == ks[j] { 1.0 } else { (ks[i] / ks[j]).f64() };
                let r = if r.is_nan() { 1.0 } else { r };
                report.max_ratio = report.max_ratio.max(r);
                if r > RATIO_BOUND {
                    report.violations.push((thetas[i].f64(), thetas[j].f64(), l.f64(), r));
                }
            }
        }
    }
    Ok(report)
}

/// Depth at which a chord in direction θ leaves the constructed portion:
/// the smaller depth of its two outer ends above the base point.
fn reach<T: Scalar>(body: &ConvexBody<T>, theta: T) -> T {
    let c = body.closure.expect("smooth body");
    let s = c.scale;
    let e = [c.end_point[0] * s, c.end_point[1] * s];
    let m = [-e[0], e[1]];
    let u = Angle::new(theta).u();
    let (p, _) = body.base_point(theta);
    dot(sub(e, p), u).min(dot(sub(m, p), u))
}

pub fn grid<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    (0..n).map(|i| lo + (hi - lo) * T::of(i as f64 / (n - 1).max(1) as f64)).collect()
}

/// Scans and stores the window constants of a curve-backed body.
pub fn estimate_windows<T: Scalar>(body: &mut ConvexBody<T>) -> Result<Windows<T>> {
    let closure = match (&body.variant, body.closure) {
        (Variant::MonomialBody { .. } | Variant::GluedBody { .. }, Some(c)) => c,
        _ => {
            let w = Windows {
                tec1_theta0: T::zero(),
                tec1_lambda0: T::zero(),
                aux_c: T::zero(),
                aux_lambda: T::zero(),
                lambda_c: min_width(body) / T::of(2.0 * SAFETY),
                estimated: true,
            };
            body.windows = Some(w);
            return Ok(w);
        }
    };
    let half_pi = T::FRAC_PI_2();
    let turning = closure.end_angle;
    let safety = T::of(SAFETY);
    let b: &ConvexBody<T> = body;
    // Directions whose base point is on the open curve: reach is positive.
    let mut span = turning / safety;
    let lambda_for = |span: T| -> T {
        grid(half_pi - span, half_pi + span, SCAN_GRID)
            .into_iter()
            .map(|t| reach(b, t))
            .fold(T::infinity(), T::min)
    };
    let mut lam = lambda_for(span);
    for _ in 0..40 {
        if lam > T::zero() {
            let th = grid(half_pi, half_pi + span, SCAN_GRID);
            let ls = grid(lam * T::of(1e-3), lam, SCAN_GRID);
            if check_chord_monotonicity(b, &th, &ls)?.passed() {
                break;
            }
        }
        span = span / safety;
        lam = lambda_for(span);
    }
    if !(lam > T::zero()) {
        return domain("no admissible chord window on the constructed curve");
    }
    let w = Windows {
        tec1_theta0: half_pi + span / safety,
        tec1_lambda0: lam / safety,
        aux_c: span / safety,
        aux_lambda: lam / safety,
        lambda_c: min_width(b) / T::of(2.0 * SAFETY),
        estimated: true,
    };
    body.windows = Some(w);
    Ok(w)
}

/// Minimum width on a 720-direction grid; chords are monotone in λ up to
/// half of it for centrally symmetric bodies.
pub fn min_width<T: Scalar>(body: &ConvexBody<T>) -> T {
    (0..WIDTH_GRID)
        .map(|i| body.width(T::PI() * T::of(i as f64 / WIDTH_GRID as f64)))
        .fold(T::infinity(), T::min)
}

/// Geometric windows of a glued body: segment i governs depths between the
/// heights of its two ends, so ρ ∈ [1/λ(b_i), 1/λ(a_i)], and its angular
/// half-width is half the tangent angle at its inner end.
pub fn geometric_regime_windows<T: Scalar>(body: &ConvexBody<T>) -> Result<Vec<RegimeWindow>> {
    let curve = match body.curve() {
        Some(c) => c,
        None => return domain("regime windows need a glued body"),
    };
    let s = body.scale().f64();
    let mut out = Vec::new();
    for (i, seg) in curve.segments.iter().enumerate() {
        let p = seg.piece();
        let outer = p.point(p.t1)[1].f64() * s;
        let inner = p.point(p.t0)[1].f64() * s;
        let rho_lo = (1.0 / outer).max(1.0);
        let rho_hi = if inner > 0.0 { 1.0 / inner } else { f64::INFINITY };
        if rho_hi > rho_lo {
            out.push(RegimeWindow {
                index: i + 1,
                beta: seg.beta.f64(),
                rho_lo,
                rho_hi,
                theta_max: 0.5 * p.angle(p.t0).f64().max(p.angle(p.t1).f64() * 1e-3),
            });
        }
    }
    Ok(out)
}
