//! Greedy decomposition N = Σ_j ⌊n_j^{1−α}⌋⌊n_j^α⌋ + remainder.

use serde::{Deserialize, Serialize};

use super::lattice::floor_snapped;
use crate::error::{domain, Result};

/// The paper's construction uses at most five parts.
pub const MAX_PARTS: usize = 5;

/// α = 2β/(2+3β), the lattice-exponent of L.
pub fn alpha_for_beta(beta: f64) -> f64 {
    2.0 * beta / (2.0 + 3.0 * beta)
}

/// ⌊n^{1−α}⌋ and ⌊n^α⌋.
pub fn lattice_size(n: u64, alpha: f64) -> (u64, u64) {
    let nf = n as f64;
    (floor_snapped(nf.powf(1.0 - alpha)), floor_snapped(nf.powf(alpha)))
}

fn size(n: u64, alpha: f64) -> u64 {
    let (g, l) = lattice_size(n, alpha);
    g * l
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub n_j: u64,
    pub g: u64,
    pub l: u64,
    /// N_j = G·L.
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub alpha: f64,
    pub n: u64,
    pub parts: Vec<Part>,
    pub remainder: u64,
}

impl Decomposition {
    /// 2^{2j} N^{(1−α)^j} after j parts.
    pub fn remainder_bound(&self, j: usize) -> f64 {
        4f64.powi(j as i32) * (self.n as f64).powf((1.0 - self.alpha).powi(j as i32))
    }

    /// Sum identity, strict decrease of n_j and the remainder bound after
    /// every step.
    pub fn check_invariants(&self) -> bool {
        let total: u64 = self.parts.iter().map(|p| p.count).sum();
        let decreasing = self.parts.windows(2).all(|w| w[1].n_j < w[0].n_j);
        let mut rem = self.n;
        let mut bounded = true;
        for (j, p) in self.parts.iter().enumerate() {
            rem -= p.count;
            bounded &= rem as f64 <= self.remainder_bound(j + 1) * (1.0 + 1e-12);
        }
        total + self.remainder == self.n && decreasing && bounded && rem == self.remainder
    }
}

/// Largest n with ⌊n^{1−α}⌋⌊n^α⌋ ≤ target (target ≥ 1): doubling
/// bracket, then integer bisection.
fn max_n(target: u64, alpha: f64) -> u64 {
    let mut lo = 1u64;
    let mut hi = 2u64;
    while size(hi, alpha) <= target {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if size(mid, alpha) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// α is accepted in (2/5, 1/2]; the closed end is the β = 2 case.
pub fn greedy_decompose(n: u64, alpha: f64) -> Result<Decomposition> {
    if n == 0 {
        return domain("N must be positive");
    }
    if !(alpha > 0.4 && alpha <= 0.5) {
        return domain(format!("α = {alpha} outside (2/5, 1/2]"));
    }
    let mut parts = Vec::new();
    let mut rem = n;
    while rem > 0 && parts.len() < MAX_PARTS {
        let n_j = max_n(rem, alpha);
        let (g, l) = lattice_size(n_j, alpha);
        parts.push(Part { n_j, g, l, count: g * l });
        rem -= g * l;
    }
    Ok(Decomposition { alpha, n, parts, remainder: rem })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn four_at_one_half() {
        // Exhaustive: the largest n ≤ 16 with ⌊√n⌋² ≤ 4.
        let best = (1..=16u64).filter(|&n| size(n, 0.5) <= 4).max().unwrap();
        assert_eq!(best, 8);
        let d = greedy_decompose(4, 0.5).unwrap();
        assert_eq!(d.parts, vec![Part { n_j: 8, g: 2, l: 2, count: 4 }]);
        assert_eq!(d.remainder, 0);
    }

    #[test]
    fn single_point() {
        let d = greedy_decompose(1, 0.45).unwrap();
        assert_eq!(d.parts.len(), 1);
        assert_eq!(d.parts[0].count, 1);
        // Maximality: n = 3 still has both floors equal to 1.
        assert_eq!(d.parts[0].n_j, 3);
        assert_eq!(d.remainder, 0);
    }

    #[test]
    fn random_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let n = rng.gen_range(1..10_000_000u64);
            let a = rng.gen_range(0.4000001..0.5);
            let d = greedy_decompose(n, a).unwrap();
            assert!(d.check_invariants(), "{n} {a}: {d:?}");
        }
        let d = greedy_decompose(1_000_000, 0.45).unwrap();
        assert!(d.remainder as f64 <= 1024.0 * 1e6f64.powf(0.55f64.powi(5)));
    }
}
