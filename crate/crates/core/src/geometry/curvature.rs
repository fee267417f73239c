//! Curvature of the monomial graphs x ↦ x^β and its inversion.

use crate::error::{domain, Error, Result};
use crate::numeric::roots::solve_decreasing;
use crate::scalar::Scalar;

fn check_beta<T: Scalar>(beta: T) -> Result<()> {
    if !(beta > T::one()) || beta > T::two() {
        return domain(format!("exponent {beta} outside (1, 2]"));
    }
    Ok(())
}

/// κ_β(x) = β(β−1)x^{β−2}(1+β²x^{2β−2})^{−3/2}.
pub fn monomial_curvature<T: Scalar>(beta: T, x: T) -> Result<T> {
    check_beta(beta)?;
    if x < T::zero() || (x == T::zero() && beta < T::two()) {
        return domain(format!("curvature abscissa {x} must be positive for beta < 2"));
    }
    Ok(kappa(beta, x))
}

#[inline]
pub(crate) fn kappa<T: Scalar>(beta: T, x: T) -> T {
    let one = T::one();
    let slope = beta * x.powf(beta - one);
    beta * (beta - one) * x.powf(beta - T::two()) / (one + slope * slope).powf(T::of(1.5))
}

#[inline]
pub(crate) fn dkappa<T: Scalar>(beta: T, x: T) -> T {
    let one = T::one();
    let s2 = beta * beta * x.powf(T::two() * beta - T::two());
    let k = kappa(beta, x);
    k * ((beta - T::two()) / x - T::of(1.5) * s2 * (T::two() * beta - T::two()) / (x * (one + s2)))
}

/// x > 0 with κ_β(x) = k, by bracket expansion and bisection.
pub fn solve_curvature_level<T: Scalar>(beta: T, k: T) -> Result<T> {
    check_beta(beta)?;
    if !(k > T::zero()) || !k.is_finite() {
        return domain(format!("curvature level {k} must be positive and finite"));
    }
    if beta == T::two() && k >= T::two() {
        return Err(Error::NoBracket(format!("level {k} not below sup κ_2 = 2")));
    }
    let two = T::two();
    let tiny = T::min_positive_value().powf(T::of(0.25));
    let huge = T::max_value().powf(T::of(0.25));
    let mut lo = T::one();
    while kappa(beta, lo) < k {
        lo = lo / two;
        if lo < tiny {
            return Err(Error::NoBracket(format!("level {k} exceeds κ on the search range")));
        }
    }
    let mut hi = T::one();
    while kappa(beta, hi) > k {
        hi = hi * two;
        if hi > huge {
            return Err(Error::NoBracket(format!("level {k} below κ on the search range")));
        }
    }
    solve_decreasing(|x| kappa(beta, x), |x| dkappa(beta, x), k, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_vertex_and_level_one() {
        assert_eq!(monomial_curvature(2.0f64, 0.0).unwrap(), 2.0);
        // Oracle: (1+4x²)^{3/2} = 2 ⇔ x = sqrt((2^{2/3} − 1)/4).
        let oracle = ((2f64.powf(2.0 / 3.0) - 1.0) / 4.0).sqrt();
        let x = solve_curvature_level(2.0f64, 1.0).unwrap();
        assert!((x - oracle).abs() < 1e-13);
        assert!((x - 0.3832).abs() < 1e-4);
    }

    #[test]
    fn round_trip_and_monotone() {
        let k = monomial_curvature(1.5f64, 0.25).unwrap();
        let x = solve_curvature_level(1.5, k).unwrap();
        assert!((x - 0.25).abs() < 1e-13);
        let a = solve_curvature_level(1.2f64, 10.0).unwrap();
        let b = solve_curvature_level(1.2f64, 100.0).unwrap();
        assert!(b < a);
        for k in [1e-3, 0.5, 10.0, 1e4, 1e9] {
            let x = solve_curvature_level(1.2f64, k).unwrap();
            let r = (monomial_curvature(1.2, x).unwrap() - k).abs() / k;
            assert!(r <= 1e-12, "k={k} residual {r:e}");
        }
    }

    #[test]
    fn errors() {
        assert!(monomial_curvature(1.5f64, 0.0).is_err());
        assert!(monomial_curvature(1.0f64, 0.5).is_err());
        assert!(matches!(solve_curvature_level(2.0f64, 3.0), Err(Error::NoBracket(_))));
    }

    #[test]
    fn strictly_decreasing_on_grid() {
        for beta in [1.1f64, 1.5, 1.9] {
            let mut prev = f64::INFINITY;
            for i in 1..=2000 {
                let x = 10.0 * i as f64 / 2000.0;
                let k = monomial_curvature(beta, x).unwrap();
                assert!(k < prev && k > 0.0);
                prev = k;
            }
        }
    }

    #[test]
    fn unbounded_towards_origin() {
        let mut prev = 0.0;
        for e in 1..40 {
            let k = monomial_curvature(1.5f64, 2f64.powi(-e)).unwrap();
            assert!(k > prev);
            prev = k;
        }
        assert!(prev > 1e5);
    }
}
