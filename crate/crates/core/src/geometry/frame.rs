use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

pub type Vec2<T> = [T; 2];

#[inline]
pub fn dot<T: Scalar>(a: Vec2<T>, b: Vec2<T>) -> T {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn sub<T: Scalar>(a: Vec2<T>, b: Vec2<T>) -> Vec2<T> {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn norm<T: Scalar>(a: Vec2<T>) -> T {
    a[0].hypot(a[1])
}

/// Angle normalized to [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Angle<T>(T);

impl<T: Scalar> Angle<T> {
    pub fn new(theta: T) -> Self {
        let tau = T::TAU();
        let mut t = theta % tau;
        if t < T::zero() {
            t = t + tau;
        }
        if t >= tau {
            t = T::zero();
        }
        Angle(t)
    }

    pub fn radians(self) -> T {
        self.0
    }

    /// Direction vector u(θ) = (cos θ, sin θ).
    pub fn u(self) -> Vec2<T> {
        let (s, c) = self.0.sin_cos();
        [c, s]
    }

    pub fn opposite(self) -> Self {
        Angle::new(self.0 + T::PI())
    }
}

/// Similarity map p ↦ scale · R(rot) · F^reflect(p) + shift, where F is the
/// reflection across the vertical axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement<T> {
    pub rot: T,
    pub reflect: bool,
    pub scale: T,
    pub shift: Vec2<T>,
}

impl<T: Scalar> Placement<T> {
    pub fn identity() -> Self {
        Placement { rot: T::zero(), reflect: false, scale: T::one(), shift: [T::zero(); 2] }
    }

    /// Rigid motion: rotation by `rot` then translation.
    pub fn rigid(rot: T, shift: Vec2<T>) -> Self {
        Placement { rot, reflect: false, scale: T::one(), shift }
    }

    /// Reflection across the vertical axis x = 0.
    pub fn mirror() -> Self {
        Placement { reflect: true, ..Self::identity() }
    }

    /// Point reflection through `c`.
    pub fn point_reflection(c: Vec2<T>) -> Self {
        let two = T::two();
        Placement::rigid(T::PI(), [two * c[0], two * c[1]])
    }

    pub fn scaling(s: T) -> Self {
        Placement { scale: s, ..Self::identity() }
    }

    pub fn linear(&self, v: Vec2<T>) -> Vec2<T> {
        let x = if self.reflect { -v[0] } else { v[0] };
        let (s, c) = self.rot.sin_cos();
        [self.scale * (c * x - s * v[1]), self.scale * (s * x + c * v[1])]
    }

    pub fn apply(&self, p: Vec2<T>) -> Vec2<T> {
        let l = self.linear(p);
        [l[0] + self.shift[0], l[1] + self.shift[1]]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Placement<T>) -> Placement<T> {
        let rot = if self.reflect { self.rot - inner.rot } else { self.rot + inner.rot };
        Placement {
            rot,
            reflect: self.reflect ^ inner.reflect,
            scale: self.scale * inner.scale,
            shift: self.apply(inner.shift),
        }
    }

    /// Maps a direction angle through the linear part.
    pub fn map_angle(&self, psi: T) -> T {
        if self.reflect {
            self.rot + T::PI() - psi
        } else {
            self.rot + psi
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_normalization_and_unit_vector() {
        let a = Angle::new(-0.5f64);
        assert!(a.radians() >= 0.0 && a.radians() < std::f64::consts::TAU);
        assert!((norm(a.u()) - 1.0).abs() < 1e-15);
        assert_eq!(Angle::new(std::f64::consts::TAU).radians(), 0.0);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let a = Placement { rot: 0.3f64, reflect: true, scale: 2.0, shift: [0.1, -0.4] };
        let b = Placement { rot: -1.1, reflect: true, scale: 0.5, shift: [1.0, 2.0] };
        let p = [0.7, -0.2];
        let lhs = a.compose(&b).apply(p);
        let rhs = a.apply(b.apply(p));
        assert!((lhs[0] - rhs[0]).abs() < 1e-14 && (lhs[1] - rhs[1]).abs() < 1e-14);
        let psi = 0.4f64;
        let d = b.linear([psi.cos(), psi.sin()]);
        let ang = b.map_angle(psi);
        assert!((d[0] / norm(d) - ang.cos()).abs() < 1e-14);
        assert!((d[1] / norm(d) - ang.sin()).abs() < 1e-14);
    }
}
