//! Exponential sums on a rectangular block of frequencies, by separable
//! per-point factors e^{2πi x m₁} e^{2πi y m₂}.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::pointset::PointSet;
use crate::error::{Error, Result};

/// Frequencies times points above this count are refused.
pub const GRID_BUDGET: u128 = 4_000_000_000;

fn factors(coord: f64, lo: i64, hi: i64) -> Vec<Complex64> {
    (lo..=hi)
        .map(|m| {
            let x = coord * m as f64;
            let (s, c) = (TAU * (x - x.round())).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

/// S(m) for m ∈ [lo₁, hi₁] × [lo₂, hi₂], row-major in m₂ then m₁.
#[derive(Debug, Clone)]
pub struct ExpSumGrid {
    pub lo: [i64; 2],
    pub hi: [i64; 2],
    values: Vec<Complex64>,
}

impl ExpSumGrid {
    pub fn new(ps: &PointSet, lo: [i64; 2], hi: [i64; 2]) -> Result<Self> {
        let (w1, w2) = ((hi[0] - lo[0] + 1).max(0) as usize, (hi[1] - lo[1] + 1).max(0) as usize);
        let work = (w1 as u128) * (w2 as u128) * ps.len() as u128;
        if work > GRID_BUDGET {
            return Err(Error::Budget(format!("{w1} × {w2} frequencies for {} points", ps.len())));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); w1 * w2];
        for p in &ps.points {
            let fx = factors(p[0], lo[0], hi[0]);
            let fy = factors(p[1], lo[1], hi[1]);
            for (j, y) in fy.iter().enumerate() {
                let row = &mut values[j * w1..(j + 1) * w1];
                for (v, x) in row.iter_mut().zip(&fx) {
                    *v += x * y;
                }
            }
        }
        Ok(ExpSumGrid { lo, hi, values })
    }

    pub fn get(&self, m: [i64; 2]) -> Option<Complex64> {
        if m[0] < self.lo[0] || m[0] > self.hi[0] || m[1] < self.lo[1] || m[1] > self.hi[1] {
            return None;
        }
        let w1 = (self.hi[0] - self.lo[0] + 1) as usize;
        Some(self.values[(m[1] - self.lo[1]) as usize * w1 + (m[0] - self.lo[0]) as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::{exp_sum, Provenance};

    #[test]
    fn agrees_with_pointwise_sums() {
        let ps = PointSet::new(vec![[0.1, 0.7], [0.35, 0.2], [0.9, 0.95]], Provenance::new("manual", serde_json::Value::Null, None)).unwrap();
        let g = ExpSumGrid::new(&ps, [-6, -3], [5, 9]).unwrap();
        for m in [[-6, -3], [0, 0], [5, 9], [2, -1]] {
            assert!((g.get(m).unwrap() - exp_sum(&ps, m)).norm() < 1e-13);
        }
        assert!(g.get([6, 0]).is_none());
    }
}
