//! G×L product lattices (g/G, ℓ/L).

use serde::{Deserialize, Serialize};

use crate::discrepancy::{PointSet, Provenance};
use crate::error::{domain, Error, Result};

/// Relative distance to an integer below which a power is taken as exact.
pub const SNAP: f64 = 1e-10;

/// ⌊x⌋, with values within 1e-10 (relative) of an integer snapped to it so
/// exact powers such as (2¹³)^{7/13} survive rounding.
pub fn floor_snapped(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= SNAP * r.abs().max(1.0) {
        r as u64
    } else {
        x.floor() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub g: u64,
    pub l: u64,
    pub beta: f64,
    /// Exponent of L: 2β/(2+3β).
    pub alpha: f64,
    pub n: u64,
    pub n_tilde: u64,
    /// N/2 < Ñ < 2N; fails only for small Ñ.
    pub within_factor_two: bool,
}

/// Points (g/G, ℓ/L) in row order (ℓ outer, g inner).
pub fn grid_lattice(g: u64, l: u64, provenance: Provenance) -> Result<PointSet> {
    if g == 0 || l == 0 {
        return Err(Error::Degenerate(format!("empty lattice {g} × {l}")));
    }
    let mut pts = Vec::with_capacity((g * l) as usize);
    for j in 0..l {
        for i in 0..g {
            pts.push([i as f64 / g as f64, j as f64 / l as f64]);
        }
    }
    PointSet::new(pts, provenance)
}

/// G = ⌊Ñ^{(2+β)/(2+3β)}⌋, L = ⌊Ñ^{2β/(2+3β)}⌋.
pub fn anisotropic_lattice(n_tilde: u64, beta: f64) -> Result<(LatticeParams, PointSet)> {
    if n_tilde < 4 {
        return domain(format!("Ñ = {n_tilde} below 4"));
    }
    if !(beta > 1.0 && beta <= 2.0) {
        return domain(format!("β = {beta} outside (1, 2]"));
    }
    let nt = n_tilde as f64;
    let g = floor_snapped(nt.powf((2.0 + beta) / (2.0 + 3.0 * beta)));
    let l = floor_snapped(nt.powf(2.0 * beta / (2.0 + 3.0 * beta)));
    if g == 0 || l == 0 {
        return Err(Error::Degenerate(format!("Ñ = {n_tilde} gives G = {g}, L = {l}")));
    }
    let n = g * l;
    let params = LatticeParams {
        g,
        l,
        beta,
        alpha: 2.0 * beta / (2.0 + 3.0 * beta),
        n,
        n_tilde,
        within_factor_two: n < 2 * n_tilde && n_tilde < 2 * n,
    };
    let prov = Provenance::new("anisotropic_lattice", serde_json::to_value(params).expect("plain struct"), None);
    Ok((params, grid_lattice(g, l, prov)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::exp_sum;

    #[test]
    fn exact_power_cases() {
        let (p, ps) = anisotropic_lattice(256, 2.0).unwrap();
        assert_eq!((p.g, p.l, p.n, ps.len()), (16, 16, 256, 256));
        let (p, _) = anisotropic_lattice(1 << 13, 1.5).unwrap();
        assert_eq!((p.g, p.l), (128, 64));
        assert!(p.within_factor_two);
    }

    #[test]
    fn points_are_distinct_and_half_open() {
        let (_, ps) = anisotropic_lattice(5000, 1.2).unwrap();
        let mut v: Vec<(u64, u64)> = ps.points.iter().map(|p| (p[0].to_bits(), p[1].to_bits())).collect();
        v.sort();
        v.dedup();
        assert_eq!(v.len(), ps.len());
        assert!(ps.points.iter().all(|p| p[0] < 1.0 && p[1] < 1.0));
    }

    #[test]
    fn floor_snapping() {
        assert_eq!(floor_snapped(127.99999999999997), 128);
        assert_eq!(floor_snapped(127.9), 127);
        assert_eq!(floor_snapped(0.3), 0);
    }

    #[test]
    fn exp_sum_support_on_dual_lattice() {
        let (p, ps) = anisotropic_lattice(3000, 1.5).unwrap();
        let (g, l) = (p.g as i64, p.l as i64);
        for m in [[g, 0], [0, l], [-2 * g, 3 * l], [1, 0], [g, 1], [g + 1, l]] {
            let s = exp_sum(&ps, m);
            let on = m[0] % g == 0 && m[1] % l == 0;
            let want = if on { (g * l) as f64 } else { 0.0 };
            assert!((s.re - want).abs() < 1e-9 && s.im.abs() < 1e-9, "{m:?}: {s}");
        }
    }
}
