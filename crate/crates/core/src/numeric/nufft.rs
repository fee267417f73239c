//! One-dimensional type-1 nonuniform FFT by Gaussian gridding.
//!
//! Computes `F(j) = sum_k c_k exp(-i j phi_k)` for `j = 0..=m` at cost
//! `O(K * SPREAD + m log m)`. Oversampling 2 with half-width `SPREAD`
//! gives roughly 1e-13 accuracy relative to `sum_k |c_k|`.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Half-width of the spreading stencil in grid points.
pub const SPREAD: usize = 14;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn smooth_size(n: usize) -> usize {
    let mut m = n.max(8);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

pub fn nufft1(phases: &[f64], coeffs: &[f64], m: usize) -> Vec<Complex64> {
    assert_eq!(phases.len(), coeffs.len());
    let nfreq = 2 * (m + 1);
    let grid = smooth_size(2 * nfreq).max(4 * SPREAD);
    let nf = nfreq as f64;
    // Greengard–Lee width for oversampling ratio 2.
    let tau = PI * SPREAD as f64 / (3.0 * nf * nf);
    let dx = 2.0 * PI / grid as f64;
    let sp = SPREAD as i64;
    let e3: Vec<f64> = (-sp + 1..=sp)
        .map(|j| (-((j as f64) * dx).powi(2) / (4.0 * tau)).exp())
        .collect();
    let mut f = vec![Complex64::new(0.0, 0.0); grid];
    let g = grid as i64;
    for (&phi, &c) in phases.iter().zip(coeffs) {
        let x = phi.rem_euclid(2.0 * PI);
        let l0 = (x / dx).floor() as i64;
        let d = x - l0 as f64 * dx;
        let e1 = c * (-d * d / (4.0 * tau)).exp();
        let e2 = (d * dx / (2.0 * tau)).exp();
        let e2inv = 1.0 / e2;
        // j = 0 .. SPREAD upward, j = -1 .. -(SPREAD-1) downward.
        let mut pw = e1;
        for j in 0..=sp {
            let idx = (l0 + j).rem_euclid(g) as usize;
            f[idx].re += pw * e3[(j + sp - 1) as usize];
            pw *= e2;
        }
        let mut pw = e1 * e2inv;
        for j in 1..sp {
            let idx = (l0 - j).rem_euclid(g) as usize;
            f[idx].re += pw * e3[(sp - 1 - j) as usize];
            pw *= e2inv;
        }
    }
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(grid).process(&mut f));
    let scale = (PI / tau).sqrt() / grid as f64;
    (0..=m)
        .map(|j| {
            let jf = j as f64;
            f[j] * (scale * (jf * jf * tau).exp())
        })
        .collect()
}

/// Reference evaluation by direct summation.
pub fn direct1(phases: &[f64], coeffs: &[f64], m: usize) -> Vec<Complex64> {
    (0..=m)
        .map(|j| {
            phases
                .iter()
                .zip(coeffs)
                .map(|(&p, &c)| Complex64::from_polar(c, -(j as f64) * p))
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (k, m, spread) in [(50usize, 30usize, 3.0), (400, 257, 0.2), (1000, 1500, 6.0)] {
            let phases: Vec<f64> = (0..k).map(|_| rng.gen_range(-spread..spread)).collect();
            let coeffs: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let l1: f64 = coeffs.iter().map(|c: &f64| c.abs()).sum();
            let a = nufft1(&phases, &coeffs, m);
            let b = direct1(&phases, &coeffs, m);
            let err = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12 * l1, "k={k} m={m} err={err:e}");
        }
    }
}
