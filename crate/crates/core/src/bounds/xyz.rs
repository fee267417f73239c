//! X, Y, Z from equalising Y^{−2−2/β} = Y^{−1}X^{−2} under XY = N^{1+ε̃}.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XyzParams {
    pub n: u64,
    pub beta: f64,
    pub eps_tilde: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl XyzParams {
    /// Relative defects of XY = N^{1+ε̃} and of the equalisation.
    pub fn identity_defects(&self) -> (f64, f64) {
        let target = (self.n as f64).powf(1.0 + self.eps_tilde);
        let prod = (self.x * self.y / target - 1.0).abs();
        let a = self.y.powf(-2.0 - 2.0 / self.beta);
        let b = 1.0 / (self.y * self.x * self.x);
        (prod, (a / b - 1.0).abs())
    }
}

/// Unit-constant powers of N. β = 2 and ε̃ = 0 are accepted as limits.
pub fn xyz_params(n: u64, beta: f64, eps_tilde: f64) -> Result<XyzParams> {
    if n < 2 || !(beta > 1.0 && beta <= 2.0) || !(0.0..=1.0).contains(&eps_tilde) {
        return domain(format!("need N ≥ 2, β ∈ (1, 2], ε̃ ∈ [0, 1]; got {n}, {beta}, {eps_tilde}"));
    }
    let e = 1.0 + eps_tilde;
    let d = 3.0 * beta + 2.0;
    let nf = n as f64;
    Ok(XyzParams {
        n,
        beta,
        eps_tilde,
        x: nf.powf(e * (beta + 2.0) / d),
        y: nf.powf(e * 2.0 * beta / d),
        z: nf.powf(-e * (4.0 * beta + 4.0) / d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn square_root_case() {
        let p = xyz_params(10_000, 2.0, 0.0).unwrap();
        assert!((p.x - 100.0).abs() < 1e-9 && (p.y - 100.0).abs() < 1e-9 && (p.z - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn identities_hold() {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = xyz_params(r.gen_range(2..1_000_000_000), r.gen_range(1.01..2.0), r.gen_range(0.001..1.0)).unwrap();
            let (a, b) = p.identity_defects();
            assert!(a < 1e-9 && b < 1e-9);
        }
    }
}
