//! Chord power laws for monomial boundaries and their inversions.

use crate::error::{domain, Error, Result};
use crate::numeric::roots::{expand_up, solve_increasing};
use crate::scalar::Scalar;

/// Unit-constant chord law of the monomial body: λ^{1/β} for
/// |θ| < λ^{(β−1)/β}, λ^{1/2}|θ|^{(2−β)/(2(β−1))} beyond.
///
/// `c` and `lambda_max` are the window constants; queries outside them are
/// rejected.
pub fn predicted_chord_abeta<T: Scalar>(beta: T, theta: T, lambda: T, c: T, lambda_max: T) -> Result<T> {
    let one = T::one();
    if !(beta > one) || beta > T::two() {
        return domain(format!("exponent {beta} outside (1, 2]"));
    }
    if !(theta.abs() < c) || !(lambda >= T::zero()) || !(lambda < lambda_max) {
        return domain(format!("(θ = {theta}, λ = {lambda}) outside the window (c = {c}, λ̃ = {lambda_max})"));
    }
    let edge = lambda.powf((beta - one) / beta);
    if theta.abs() < edge || beta == T::two() {
        Ok(lambda.powf(one / beta))
    } else {
        let p = (T::two() - beta) / (T::two() * (beta - one));
        Ok(lambda.sqrt() * theta.abs().powf(p))
    }
}

/// f(z) = |z + 1|^β − zβ − 1.
pub fn chord_equation_f<T: Scalar>(beta: T, z: T) -> T {
    let one = T::one();
    let zp = (z + one).abs();
    // Binomial series from the quadratic term avoids the cancellation.
    if z.abs() < T::of(0.25) {
        let mut term = beta * (beta - one) * T::half() * z * z;
        let mut acc = T::zero();
        let mut k = T::two();
        for _ in 0..200 {
            acc = acc + term;
            if term.abs() <= T::epsilon() * acc.abs() * T::of(0.1) {
                break;
            }
            term = term * (beta - k) / (k + one) * z;
            k = k + one;
        }
        acc
    } else {
        zp.powf(beta) - z * beta - one
    }
}

/// Root z ≥ 0 of f(z) = λ/(x_o^β cos θ).
pub fn solve_chord_equation<T: Scalar>(beta: T, x_o: T, lambda: T, theta: T) -> Result<T> {
    let (s, cth) = (T::zero(), theta.cos());
    if !(lambda >= s) || !(cth > s) || !(x_o > s) {
        return domain("need λ ≥ 0, cos θ > 0 and x_o > 0");
    }
    if !(beta > T::one()) || beta > T::two() {
        return domain(format!("exponent {beta} outside (1, 2]"));
    }
    let rhs = lambda / (x_o.powf(beta) * cth);
    if rhs == s {
        return Ok(s);
    }
    if beta == T::two() {
        return Ok(rhs.sqrt());
    }
    let f = |z: T| chord_equation_f(beta, z);
    let df = |z: T| beta * ((z + T::one()).powf(beta - T::one()) - T::one());
    // Start from the quadratic small-z approximation.
    let guess = (T::two() * rhs / (beta * (beta - T::one()))).sqrt();
    let start = guess.max(T::min_positive_value());
    let hi = expand_up(start, T::two(), T::max_value().sqrt(), |z| f(z) >= rhs)
        .ok_or_else(|| Error::NoBracket(format!("no root of f(z) = {rhs}")))?;
    solve_increasing(f, df, rhs, s, hi)
}

/// x with g(x) = y for g(x) = x^α on [0, 1) and x^β on [1, ∞).
pub fn invert_piecewise_power<T: Scalar>(alpha: T, beta: T, y: T) -> Result<T> {
    if !(alpha > T::zero()) || !(beta > T::zero()) || !(y >= T::zero()) {
        return domain("need α, β > 0 and y ≥ 0");
    }
    Ok(if y < T::one() { y.powf(T::one() / alpha) } else { y.powf(T::one() / beta) })
}
