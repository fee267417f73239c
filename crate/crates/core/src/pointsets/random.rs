//! Uniform random baselines and composite sets built from the decomposition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::decompose::{alpha_for_beta, greedy_decompose};
use super::lattice::grid_lattice;
use crate::discrepancy::{PointSet, Provenance};
use crate::error::{domain, Result};

/// Stream of a seeded generator reserved for filler points.
const FILLER_STREAM: u64 = 1;
const SHIFT_STREAM: u64 = 2;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn uniform(r: &mut ChaCha8Rng, n: usize) -> Vec<[f64; 2]> {
    (0..n).map(|_| [r.gen::<f64>(), r.gen::<f64>()]).collect()
}

/// N i.i.d. uniform points from ChaCha8 seeded with `seed`.
pub fn random_pointset(n: usize, seed: u64) -> Result<PointSet> {
    let pts = uniform(&mut rng(seed, 0), n);
    PointSet::new(pts, Provenance::new("chacha8_uniform", serde_json::json!({ "n": n }), Some(seed)))
}

fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 { 0.0 } else { r }
}

/// The parts of the composite set: lattices with N_j ≥ N^{α/2}, the first
/// unshifted and the others under seeded torus shifts, then one filler part
/// of uniform points for the small parts and the remainder.
pub fn composite_parts(n: u64, beta: f64, seed: u64) -> Result<Vec<PointSet>> {
    if !(beta > 1.0 && beta <= 2.0) {
        return domain(format!("β = {beta} outside (1, 2]"));
    }
    let alpha = alpha_for_beta(beta);
    let dec = greedy_decompose(n, alpha)?;
    let threshold = (n as f64).powf(alpha / 2.0);
    let mut shifts = rng(seed, SHIFT_STREAM);
    let mut out = Vec::new();
    let mut filler = dec.remainder;
    for (j, p) in dec.parts.iter().enumerate() {
        if (p.count as f64) < threshold {
            filler += p.count;
            continue;
        }
        let prov = Provenance::new("composite_part", serde_json::json!({ "part": j + 1, "n_j": p.n_j, "g": p.g, "l": p.l }), Some(seed));
        let mut ps = grid_lattice(p.g, p.l, prov)?;
        if !out.is_empty() {
            let s = [shifts.gen::<f64>(), shifts.gen::<f64>()];
            for q in &mut ps.points {
                *q = [wrap(q[0] + s[0]), wrap(q[1] + s[1])];
            }
            ps.provenance.params["shift"] = serde_json::json!(s);
        }
        out.push(ps);
    }
    if filler > 0 {
        let pts = uniform(&mut rng(seed, FILLER_STREAM), filler as usize);
        out.push(PointSet::new(pts, Provenance::new("composite_filler", serde_json::json!({ "count": filler }), Some(seed)))?);
    }
    Ok(out)
}

pub fn composite_pointset(n: u64, beta: f64, seed: u64) -> Result<PointSet> {
    let parts = composite_parts(n, beta, seed)?;
    let sizes: Vec<usize> = parts.iter().map(PointSet::len).collect();
    let pts = parts.into_iter().flat_map(|p| p.points).collect();
    PointSet::new(pts, Provenance::new("composite", serde_json::json!({ "n": n, "beta": beta, "part_sizes": sizes }), Some(seed)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointsets::anisotropic_lattice;

    #[test]
    fn seeded_and_centred() {
        let a = random_pointset(4096, 9).unwrap();
        assert_eq!(a, random_pointset(4096, 9).unwrap());
        let n = a.len() as f64;
        for k in 0..2 {
            let m = a.points.iter().map(|p| p[k]).sum::<f64>() / n;
            assert!((m - 0.5).abs() <= 3.0 / (12.0 * n).sqrt());
        }
    }

    #[test]
    fn exact_lattice_sizes_give_the_lattice() {
        let (p, lat) = anisotropic_lattice(1 << 13, 1.5).unwrap();
        let c = composite_pointset(p.n, 1.5, 4).unwrap();
        assert_eq!(c.points, lat.points);
    }

    #[test]
    fn cardinality_is_exact() {
        let mut r = rng(77, 0);
        for _ in 0..100 {
            let n = r.gen_range(100..100_000u64);
            let beta = r.gen_range(1.05..2.0);
            assert_eq!(composite_pointset(n, beta, n).unwrap().len() as u64, n);
        }
    }
}
