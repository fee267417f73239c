//! Gauss–Legendre rules of arbitrary order and Gregory end corrections for
//! uniform grids.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::scalar::Scalar;

/// Gauss–Legendre rule on [-1, 1], nodes ascending.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            // Tricomi initial guess, then Newton on P_n.
            let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
            let mut x = (theta.cos()) * (1.0 - (1.0 - 1.0 / nf) / (8.0 * nf * nf));
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1e-300) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule { nodes, weights }
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<T: Scalar>(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        let h = (b - a) * T::half();
        let c = a + h;
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + T::of(*w) * f(c + h * T::of(*x));
        }
        acc * h
    }

    /// Maps the rule to `[a, b]`, returning `(node, weight)` pairs.
    pub fn mapped<T: Scalar>(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let h = (b - a) * T::half();
        let c = a + h;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (c + h * T::of(*x), h * T::of(*w)))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared, lazily built rule of order `n`.
pub fn gauss_rule(n: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().expect("gauss cache").get(&n) {
        return r.clone();
    }
    let rule = Arc::new(GaussRule::new(n));
    cache
        .lock()
        .expect("gauss cache")
        .entry(n)
        .or_insert(rule)
        .clone()
}

/// Adaptive Gauss–Kronrod-free integration: bisects until a 16-point and a
/// 32-point rule agree to `tol` relative to the accumulated magnitude.
pub fn adaptive<T: Scalar>(a: T, b: T, tol: T, f: &impl Fn(T) -> T) -> T {
    fn rec<T: Scalar>(a: T, b: T, tol: T, f: &impl Fn(T) -> T, depth: usize, lo: &GaussRule, hi: &GaussRule) -> T {
        let coarse = lo.integrate(a, b, f);
        let fine = hi.integrate(a, b, f);
        let scale = fine.abs().max(T::min_positive_value());
        if depth == 0 || (fine - coarse).abs() <= tol * scale {
            return fine;
        }
        let m = a + (b - a) * T::half();
        rec(a, m, tol, f, depth - 1, lo, hi) + rec(m, b, tol, f, depth - 1, lo, hi)
    }
    let lo = gauss_rule(16);
    let hi = gauss_rule(32);
    rec(a, b, tol, f, 30, &lo, &hi)
}

/// Gregory end weights of order `q` for a unit-spaced grid.
///
/// The composite rule with these weights at the first and last `q` nodes
/// (interior weights 1) integrates polynomials of degree `< q` exactly once
/// the grid has at least `2q` intervals.
pub fn gregory_end_weights(q: usize) -> Vec<f64> {
    if q == 8 {
        return GREGORY8.iter().map(|(n, d)| n / d).collect();
    }
    gregory_end_weights_solved(q)
}

/// Exact order-8 end weights (rational solution of the moment system).
const GREGORY8: [(f64, f64); 8] = [
    (1070017.0, 3628800.0),
    (5537111.0, 3628800.0),
    (103613.0, 403200.0),
    (261115.0, 145152.0),
    (298951.0, 725760.0),
    (515677.0, 403200.0),
    (3349879.0, 3628800.0),
    (3662753.0, 3628800.0),
];

fn gregory_end_weights_solved(q: usize) -> Vec<f64> {
    assert!((1..=10).contains(&q));
    // Lower-end Euler–Maclaurin constants for x^k: 1/2 for k = 0,
    // -B_{k+1}/(k+1) for odd k, zero for even k >= 2.
    const BERN: [f64; 12] = [
        1.0,
        -0.5,
        1.0 / 6.0,
        0.0,
        -1.0 / 30.0,
        0.0,
        1.0 / 42.0,
        0.0,
        -1.0 / 30.0,
        0.0,
        5.0 / 66.0,
        0.0,
    ];
    let c = |k: usize| -> f64 {
        if k == 0 {
            0.5
        } else if k % 2 == 1 {
            -BERN[k + 1] / (k as f64 + 1.0)
        } else {
            0.0
        }
    };
    let mut a = vec![vec![0.0f64; q + 1]; q];
    for (k, row) in a.iter_mut().enumerate() {
        let mut rhs = 0.0;
        for j in 0..q {
            let v = (j as f64).powi(k as i32);
            let v = if k == 0 { 1.0 } else { v };
            row[j] = v;
            rhs += v;
        }
        row[q] = rhs - c(k);
    }
    solve_dense(a)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("nonempty");
        a.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..=n {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = a[row][n];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x
}

/// Composite uniform-grid weights on `m + 1` nodes with Gregory corrections
/// of order `q` at both ends (requires `m >= 2q`), scaled by the step `h`.
pub fn gregory_weights(m: usize, q: usize, h: f64) -> Vec<f64> {
    assert!(m >= 2 * q, "grid too short for Gregory order {q}");
    let end = gregory_end_weights(q);
    let mut w = vec![h; m + 1];
    for (j, e) in end.iter().enumerate() {
        w[j] = e * h;
        w[m - j] = e * h;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 33, 64] {
            let r = gauss_rule(n);
            for k in 0..2 * n {
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                let got = r.integrate(-1.0, 1.0, |x: f64| x.powi(k as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} k={k} got={got}");
            }
        }
    }

    #[test]
    fn gauss_large_order_weights_sum_to_two() {
        let r = GaussRule::new(400);
        let s: f64 = r.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-12);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn gregory_second_order_is_classical() {
        let w = gregory_end_weights(2);
        assert!((w[0] - 5.0 / 12.0).abs() < 1e-15);
        assert!((w[1] - 13.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn gregory_exact_on_polynomials() {
        let q = 8;
        let m = 40;
        let h = 0.05;
        let w = gregory_weights(m, q, h);
        for k in 0..q {
            let got: f64 = w.iter().enumerate().map(|(j, wj)| wj * (j as f64 * h).powi(k as i32)).sum();
            let b = m as f64 * h;
            let exact = b.powi(k as i32 + 1) / (k as f64 + 1.0);
            assert!((got - exact).abs() < 1e-13 * exact.max(1.0), "k={k} {got} {exact}");
        }
        assert!(gregory_end_weights(8).iter().all(|&x| x > 0.0));
        let solved = gregory_end_weights_solved(8);
        for (a, b) in solved.iter().zip(gregory_end_weights(8)) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let v = adaptive(0.0, 1.0, 1e-12, &|x: f64| x.sqrt());
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }
}
