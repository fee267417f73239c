//! Smooth boundary pieces: placed monomial graphs and circular arcs.

use serde::{Deserialize, Serialize};

use super::curvature::kappa;
use super::frame::{Placement, Vec2};
use crate::numeric::gauss::gauss_rule;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape<T> {
    /// Local curve t ↦ (t − anchor, t^β − anchor^β), t ≥ 0.
    Graph { beta: T, anchor: T },
    /// Local curve t ↦ (r sin t, −r cos t); t is the local tangent angle.
    Arc { radius: T },
}

/// A boundary piece on the local parameter interval [t0, t1], t0 < t1.
///
/// Counterclockwise traversal runs with increasing `t` unless the placement
/// reflects, in which case it runs with decreasing `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece<T> {
    pub shape: Shape<T>,
    pub t0: T,
    pub t1: T,
    pub place: Placement<T>,
}

/// t^β − a^β without cancellation for t close to a.
pub(crate) fn pow_diff<T: Scalar>(t: T, a: T, beta: T) -> T {
    if a == T::zero() {
        return t.powf(beta);
    }
    let r = (t - a) / a;
    if r.abs() < T::half() {
        a.powf(beta) * (beta * r.ln_1p()).exp_m1()
    } else {
        t.powf(beta) - a.powf(beta)
    }
}

impl<T: Scalar> Piece<T> {
    pub fn forward(&self) -> bool {
        !self.place.reflect
    }

    fn sigma(&self) -> T {
        if self.place.reflect {
            -T::one()
        } else {
            T::one()
        }
    }

    /// Parameters at the counterclockwise start and end.
    pub fn ccw_ends(&self) -> (T, T) {
        if self.forward() {
            (self.t0, self.t1)
        } else {
            (self.t1, self.t0)
        }
    }

    pub fn local_point(&self, t: T) -> Vec2<T> {
        match self.shape {
            Shape::Graph { beta, anchor } => [t - anchor, pow_diff(t, anchor, beta)],
            Shape::Arc { radius } => {
                let (s, c) = t.sin_cos();
                [radius * s, -radius * c]
            }
        }
    }

    pub fn local_velocity(&self, t: T) -> Vec2<T> {
        match self.shape {
            Shape::Graph { beta, .. } => [T::one(), beta * t.powf(beta - T::one())],
            Shape::Arc { radius } => {
                let (s, c) = t.sin_cos();
                [radius * c, radius * s]
            }
        }
    }

    pub fn local_angle(&self, t: T) -> T {
        match self.shape {
            Shape::Graph { beta, .. } => (beta * t.powf(beta - T::one())).atan(),
            Shape::Arc { .. } => t,
        }
    }

    pub fn point(&self, t: T) -> Vec2<T> {
        self.place.apply(self.local_point(t))
    }

    /// d point / dt in placed coordinates.
    pub fn velocity(&self, t: T) -> Vec2<T> {
        self.place.linear(self.local_velocity(t))
    }

    /// Counterclockwise tangent angle (not reduced mod 2π).
    pub fn angle(&self, t: T) -> T {
        self.place.rot + self.sigma() * self.local_angle(t)
    }

    pub fn curvature(&self, t: T) -> T {
        let k = match self.shape {
            Shape::Graph { beta, .. } => {
                if t == T::zero() && beta < T::two() {
                    T::infinity()
                } else {
                    kappa(beta, t)
                }
            }
            Shape::Arc { radius } => T::one() / radius,
        };
        k / self.place.scale
    }

    /// Counterclockwise turning across the piece.
    pub fn turning(&self) -> T {
        self.local_angle(self.t1) - self.local_angle(self.t0)
    }

    /// Local parameter whose counterclockwise tangent angle is `psi` (mod 2π),
    /// clamped to the piece.
    pub fn param_for_angle(&self, psi: T) -> T {
        let tau = T::TAU();
        let lo = self.local_angle(self.t0);
        let mut loc = self.sigma() * (psi - self.place.rot);
        loc = lo + (loc - lo).modulo(tau);
        if loc - lo > T::PI() + T::one() {
            loc = loc - tau;
        }
        let t = match self.shape {
            Shape::Graph { beta, .. } => {
                if loc <= T::zero() {
                    T::zero()
                } else {
                    (loc.tan() / beta).powf(T::one() / (beta - T::one()))
                }
            }
            Shape::Arc { .. } => loc,
        };
        t.max(self.t0).min(self.t1)
    }

    /// Breakpoints of the base panels; graphs reaching towards t = 0 are
    /// graded geometrically towards the origin.
    pub fn base_breaks(&self) -> Vec<T> {
        match self.shape {
            Shape::Graph { .. } if self.t0 < T::of(0.25) * self.t1 => {
                // Down to where the remaining turning and extent are negligible.
                let neg = T::of(1e-16);
                let a0 = self.local_angle(self.t0);
                let mut v = vec![self.t1];
                let mut x = self.t1;
                loop {
                    x = x * T::half();
                    if x <= self.t0 * T::of(1.5)
                        || (self.local_angle(x) - a0 <= neg && x <= neg * self.t1)
                        || x <= T::min_positive_value().sqrt()
                    {
                        break;
                    }
                    v.push(x);
                }
                v.push(self.t0);
                v.reverse();
                v
            }
            _ => {
                let n = match self.shape {
                    Shape::Arc { .. } => ((self.t1 - self.t0).f64() / 0.25).ceil().max(1.0) as usize,
                    _ => 2,
                };
                (0..=n)
                    .map(|i| self.t0 + (self.t1 - self.t0) * T::of(i as f64 / n as f64))
                    .collect()
            }
        }
    }

    /// Speed |d point / dt|.
    pub fn speed(&self, t: T) -> T {
        let v = self.velocity(t);
        v[0].hypot(v[1])
    }

    /// Arclength between local parameters `a < b`.
    pub fn arclength_between(&self, a: T, b: T) -> T {
        match self.shape {
            Shape::Arc { radius } => radius * self.place.scale * (b - a),
            Shape::Graph { .. } => {
                let rule = gauss_rule(24);
                let mut acc = T::zero();
                let breaks = self.base_breaks();
                for w in breaks.windows(2) {
                    let (lo, hi) = (w[0].max(a), w[1].min(b));
                    if hi > lo {
                        acc = acc + rule.integrate(lo, hi, |t| self.speed(t));
                    }
                }
                acc
            }
        }
    }

    pub fn arclength(&self) -> T {
        self.arclength_between(self.t0, self.t1)
    }

    /// Same piece with an extra placement applied on the outside.
    pub fn placed(&self, outer: &Placement<T>) -> Piece<T> {
        Piece { place: outer.compose(&self.place), ..*self }
    }
}
