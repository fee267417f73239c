//! D₂ = Σ_{m≠0} |S(m)|² w(m), truncated at |m| ≤ R, with an empirical
//! tail bound from the decay w(m) ≲ |m|⁻³.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::{D2Estimate, Method};
use super::pointset::PointSet;
use crate::error::{domain, Error, Result};
use crate::fourier::power::WeightValue;
use crate::fourier::table::{class_weight, shell_of, shells, SpectralWeightTable, Symmetry};
use crate::geometry::ConvexBody;
use crate::numeric::sum::pairwise;

/// Safety factor on the fitted tail constant.
pub const TAIL_SAFETY: f64 = 4.0;
/// Tail bound above this fraction of the partial sum triggers the policy.
pub const TAIL_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailPolicy {
    /// Record a warning on the estimate.
    #[default]
    Warn,
    /// Fail with an accuracy error.
    Strict,
}

/// S(m) = Σ_p e^{2πi p·m}.
pub fn exp_sum(ps: &PointSet, m: [i64; 2]) -> Complex64 {
    let (m1, m2) = (m[0] as f64, m[1] as f64);
    let terms: Vec<Complex64> = ps
        .points
        .iter()
        .map(|p| {
            // Odd reduction of each product keeps the phase small and makes
            // S(−m) the exact conjugate of S(m).
            let (x, y) = (p[0] * m1, p[1] * m2);
            let f = (x - x.round()) + (y - y.round());
            let (s, c) = (TAU * f).sin_cos();
            Complex64::new(c, s)
        })
        .collect();
    crate::numeric::sum::pairwise_complex(&terms)
}

/// ĉ = 4 max_{R/2 ≤ |m| ≤ R} w(m)|m|³ over the given vectors.
fn tail_constant<'a>(r: u64, entries: impl Iterator<Item = (&'a [i64; 2], &'a WeightValue)>) -> f64 {
    let half = r as f64 / 2.0;
    entries
        .filter_map(|(m, w)| {
            let rho = (m[0] as f64).hypot(m[1] as f64);
            (rho >= half && rho <= r as f64).then(|| w.w * rho.powi(3))
        })
        .fold(0.0, f64::max)
        * TAIL_SAFETY
}

fn apply_policy(est: &mut D2Estimate, policy: TailPolicy) -> Result<()> {
    if est.error > TAIL_FRACTION * est.value {
        let msg = format!("tail bound {:.3e} exceeds {}% of the partial sum {:.3e}", est.error, TAIL_FRACTION * 100.0, est.value);
        match policy {
            TailPolicy::Warn => est.warnings.push(msg),
            TailPolicy::Strict => return Err(Error::Accuracy { target: TAIL_FRACTION, achieved: est.error / est.value }),
        }
    }
    Ok(())
}

/// Spectral D₂ from a prepared table. Shell sums are pairwise and are
/// accumulated in shell order, so the result grows with R.
pub fn d2_spectral_with_table(table: &SpectralWeightTable, ps: &PointSet, policy: TailPolicy) -> Result<D2Estimate> {
    let shell_sums: Vec<f64> = shells(table.radius)
        .into_par_iter()
        .map(|shell| {
            let terms: Vec<f64> = shell
                .iter()
                .map(|&m| exp_sum(ps, m).norm_sqr() * table.get(m).expect("table covers the disk").w)
                .collect();
            pairwise(&terms)
        })
        .collect();
    let mut value = 0.0;
    for s in shell_sums {
        value += s;
    }
    let n = ps.len() as f64;
    let c_hat = tail_constant(table.radius, table.expand().iter().map(|(m, w)| (m, w)));
    let tail = n * n * c_hat * TAU / table.radius as f64;
    let mut est = D2Estimate {
        value,
        method: Method::Spectral,
        error: tail,
        n: ps.len(),
        body_fingerprint: table.fingerprint.clone(),
        parameters: serde_json::json!({ "radius": table.radius, "classes": table.class_count(), "c_hat": c_hat }),
        warnings: Vec::new(),
    };
    apply_policy(&mut est, policy)?;
    Ok(est)
}

pub fn d2_spectral(body: &ConvexBody<f64>, ps: &PointSet, radius: u64, policy: TailPolicy) -> Result<D2Estimate> {
    d2_spectral_with_table(&SpectralWeightTable::compute(body, radius)?, ps, policy)
}

/// As `d2_spectral`, with the table read from or stored in the weight
/// cache (`dir`, else the cache directory). Cached tables are bit-identical
/// to computed ones.
pub fn d2_spectral_cached(body: &ConvexBody<f64>, ps: &PointSet, radius: u64, dir: Option<&Path>, policy: TailPolicy) -> Result<D2Estimate> {
    d2_spectral_with_table(&SpectralWeightTable::cached(body, radius, dir)?, ps, policy)
}

/// N² Σ_{m ∈ (GZ×LZ)∖0, |m| ≤ R} w(m) for the full G×L lattice. Only
/// dual vectors are evaluated; the tail bound uses their density 1/(GL).
pub fn d2_spectral_lattice(body: &ConvexBody<f64>, g: u64, l: u64, radius: u64, policy: TailPolicy) -> Result<D2Estimate> {
    if g == 0 || l == 0 || radius == 0 {
        return domain("G, L and R must be positive");
    }
    let sym = Symmetry::of(body);
    let (gi, li, r) = (g as i64, l as i64, radius as i64);
    let mut by_shell: BTreeMap<u64, Vec<[i64; 2]>> = BTreeMap::new();
    for a in -(r / gi)..=(r / gi) {
        for b in -(r / li)..=(r / li) {
            let m = [a * gi, b * li];
            let n2 = m[0] * m[0] + m[1] * m[1];
            if n2 > 0 && n2 <= r * r {
                by_shell.entry(shell_of(m)).or_default().push(m);
            }
        }
    }
    // One evaluation per class.
    let mut keys: BTreeMap<[i64; 2], [i64; 2]> = BTreeMap::new();
    for m in by_shell.values().flatten() {
        keys.entry(sym.key(*m)).or_insert(*m);
    }
    let reps: Vec<([i64; 2], [i64; 2])> = keys.into_iter().collect();
    let weights: Vec<Result<WeightValue>> = reps.par_iter().map(|(_, m)| class_weight(body, sym, *m)).collect();
    let mut w_of = BTreeMap::new();
    for ((k, _), w) in reps.iter().zip(weights) {
        w_of.insert(*k, w?);
    }
    let nn = (g * l) as f64;
    let mut value = 0.0;
    for shell in by_shell.values() {
        // |S(m)|² = N² on the dual lattice.
        let terms: Vec<f64> = shell.iter().map(|m| nn * nn * w_of[&sym.key(*m)].w).collect();
        value += pairwise(&terms);
    }
    let entries: Vec<([i64; 2], WeightValue)> = by_shell.values().flatten().map(|m| (*m, w_of[&sym.key(*m)])).collect();
    let c_hat = tail_constant(radius, entries.iter().map(|(m, w)| (m, w)));
    let tail = nn * c_hat * TAU / radius as f64;
    let mut est = D2Estimate {
        value,
        method: Method::SpectralLattice,
        error: tail,
        n: (g * l) as usize,
        body_fingerprint: body.fingerprint(),
        parameters: serde_json::json!({ "g": g, "l": l, "radius": radius, "dual_vectors": entries.len(), "classes": w_of.len(), "c_hat": c_hat }),
        warnings: Vec::new(),
    };
    apply_policy(&mut est, policy)?;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::pointset::Provenance;

    fn lattice(g: u64, l: u64) -> PointSet {
        let mut pts = Vec::new();
        for i in 0..g {
            for j in 0..l {
                pts.push([i as f64 / g as f64, j as f64 / l as f64]);
            }
        }
        PointSet::new(pts, Provenance::new("lattice", serde_json::json!({ "g": g, "l": l }), None)).unwrap()
    }

    #[test]
    fn exp_sum_identities() {
        let ps = lattice(4, 3);
        assert!((exp_sum(&ps, [8, -6]) - Complex64::new(12.0, 0.0)).norm() < 1e-12);
        assert!(exp_sum(&ps, [1, 0]).norm() < 1e-12 && exp_sum(&ps, [4, 1]).norm() < 1e-12);
        let one = PointSet::new(vec![[0.0, 0.0]], ps.provenance.clone()).unwrap();
        assert_eq!(exp_sum(&one, [17, -3]), Complex64::new(1.0, 0.0));
        let r = PointSet::new(vec![[0.13, 0.77], [0.5, 0.21]], ps.provenance.clone()).unwrap();
        assert_eq!(exp_sum(&r, [3, 5]).norm(), exp_sum(&r, [-3, -5]).norm());
    }

    #[test]
    fn lattice_form_matches_full_sum() {
        let sq = ConvexBody::square(0.5).unwrap();
        let t = SpectralWeightTable::compute(&sq, 24).unwrap();
        let full = d2_spectral_with_table(&t, &lattice(4, 3), TailPolicy::Warn).unwrap();
        let lat = d2_spectral_lattice(&sq, 4, 3, 24, TailPolicy::Warn).unwrap();
        assert!((full.value - lat.value).abs() <= 1e-12 * lat.value, "{} vs {}", full.value, lat.value);
    }

    #[test]
    fn partial_sums_grow_with_radius() {
        let b = ConvexBody::monomial_body(1.5).unwrap();
        let ps = PointSet::new(vec![[0.13, 0.77], [0.5, 0.21], [0.9, 0.4]], Provenance::new("manual", serde_json::Value::Null, None)).unwrap();
        let small = d2_spectral(&b, &ps, 8, TailPolicy::Warn).unwrap();
        let big = d2_spectral(&b, &ps, 16, TailPolicy::Warn).unwrap();
        assert!(big.value >= small.value);
        // Shifting all points leaves every |S(m)| unchanged.
        let shifted = d2_spectral(&b, &ps.translated([0.31, 0.62]), 8, TailPolicy::Warn).unwrap();
        assert!((shifted.value - small.value).abs() <= 1e-12 * small.value);
    }

    #[test]
    fn disk_lattice_is_swap_symmetric() {
        let d = ConvexBody::disk(0.25).unwrap();
        let a = d2_spectral_lattice(&d, 3, 5, 40, TailPolicy::Warn).unwrap();
        let b = d2_spectral_lattice(&d, 5, 3, 40, TailPolicy::Warn).unwrap();
        assert!((a.value - b.value).abs() <= 1e-14 * a.value);
    }
}
