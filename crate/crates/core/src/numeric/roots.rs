//! Bracketed scalar root finding: bisection to a narrow bracket, then a few
//! guarded Newton steps.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Absolute bracket width at which bisection hands over to Newton.
pub const BRACKET_WIDTH: f64 = 1e-13;
/// Newton polish steps after bisection.
pub const NEWTON_STEPS: usize = 3;
const MAX_BISECTIONS: usize = 2000;

/// Solves `f(x) = target` for `f` nondecreasing on `[lo, hi]`.
///
/// `df` is the derivative used for polishing; steps leaving the final bracket
/// are rejected. Bisection stops once the bracket is narrower than
/// `BRACKET_WIDTH` or a few ulps of the midpoint, whichever is larger relative
/// to the scale of the root; this keeps tiny roots accurate in relative terms.
pub fn solve_increasing<T, F, D>(f: F, df: D, target: T, lo: T, hi: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
    D: Fn(T) -> T,
{
    let (mut a, mut b) = (lo, hi);
    let fa = f(a) - target;
    let fb = f(b) - target;
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::NoBracket("function is NaN at a bracket end".into()));
    }
    if fa > T::zero() || fb < T::zero() {
        return Err(Error::NoBracket(format!(
            "target {target} outside [{}, {}]",
            fa + target,
            fb + target
        )));
    }
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    let width = T::of(BRACKET_WIDTH);
    let ulp = T::of(8.0) * T::epsilon();
    for _ in 0..MAX_BISECTIONS {
        let m = a + (b - a) * T::half();
        if m <= a || m >= b {
            break;
        }
        let fm = f(m) - target;
        if fm == T::zero() {
            return Ok(m);
        }
        if fm < T::zero() {
            a = m;
        } else {
            b = m;
        }
        let scale = a.abs().max(b.abs());
        // Stop at the absolute width only when the root is not tiny.
        if b - a <= ulp * scale || (b - a <= width && b - a <= T::of(1e-3) * scale) {
            break;
        }
    }
    let mut x = a + (b - a) * T::half();
    for _ in 0..NEWTON_STEPS {
        let fx = f(x) - target;
        let d = df(x);
        if fx == T::zero() || !(d.abs() > T::zero()) || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        if !(next >= a && next <= b) {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Solves `f(x) = target` for `f` nonincreasing on `[lo, hi]`.
pub fn solve_decreasing<T, F, D>(f: F, df: D, target: T, lo: T, hi: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
    D: Fn(T) -> T,
{
    solve_increasing(|x| -f(x), |x| -df(x), -target, lo, hi)
}

/// Grows `hi` geometrically from `start` until `pred(hi)` holds.
pub fn expand_up<T: Scalar>(start: T, factor: T, limit: T, pred: impl Fn(T) -> bool) -> Option<T> {
    let mut x = start;
    while x <= limit {
        if pred(x) {
            return Some(x);
        }
        x = x * factor;
    }
    None
}

/// Shrinks `lo` geometrically from `start` until `pred(lo)` holds.
pub fn expand_down<T: Scalar>(start: T, factor: T, floor: T, pred: impl Fn(T) -> bool) -> Option<T> {
    let mut x = start;
    while x >= floor {
        if pred(x) {
            return Some(x);
        }
        x = x / factor;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_of_two() {
        let x: f64 = solve_increasing(|x| x * x * x, |x| 3.0 * x * x, 2.0, 0.0, 2.0).unwrap();
        assert!((x - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn tiny_root_is_relatively_accurate() {
        let r = 3.7e-11;
        let x: f64 = solve_increasing(|x| x, |_| 1.0, r, 0.0, 1.0).unwrap();
        assert!(((x - r) / r).abs() < 1e-14);
    }

    #[test]
    fn decreasing_and_no_bracket() {
        let x = solve_decreasing(|x: f64| 1.0 / x, |x| -1.0 / (x * x), 4.0, 0.1, 1.0).unwrap();
        assert!((x - 0.25).abs() < 1e-15);
        assert!(matches!(
            solve_increasing(|x: f64| x, |_| 1.0, 5.0, 0.0, 1.0),
            Err(Error::NoBracket(_))
        ));
    }

    #[test]
    fn single_precision_works() {
        let x: f32 = solve_increasing(|x| x * x, |x| 2.0 * x, 2.0, 0.0, 2.0).unwrap();
        assert!((x - 2f32.sqrt()).abs() < 1e-6);
    }
}
