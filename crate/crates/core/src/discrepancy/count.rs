//! Periodized counting discrepancy of a translated, dilated body.

use crate::error::{domain, Result};
use crate::geometry::ConvexBody;

use super::pointset::PointSet;

/// A body placed for counting: τ + δC is read as τ + δ(C − a) with a the
/// lower-left corner of the bounding box, so every copy sits in τ + [0, 1]².
#[derive(Debug, Clone)]
pub struct CountingFrame<'a> {
    pub body: &'a ConvexBody<f64>,
    pub anchor: [f64; 2],
    pub extent: [f64; 2],
}

impl<'a> CountingFrame<'a> {
    pub fn new(body: &'a ConvexBody<f64>) -> Result<Self> {
        let (lo, hi) = body.bounding_box();
        let extent = [hi[0] - lo[0], hi[1] - lo[1]];
        // The translates with |n|∞ ≤ 1 cover every copy once the box fits in the torus.
        if extent[0] > 1.0 + 1e-12 || extent[1] > 1.0 + 1e-12 {
            return domain(format!("bounding box {} × {} exceeds the unit torus", extent[0], extent[1]));
        }
        Ok(CountingFrame { body, anchor: lo, extent })
    }

    /// Number of integer translates p + n inside τ + δ(C − a); boundary hits count.
    pub fn hits(&self, p: [f64; 2], tau: [f64; 2], delta: f64) -> u32 {
        let r = [(p[0] - tau[0]).rem_euclid(1.0), (p[1] - tau[1]).rem_euclid(1.0)];
        let r = [if r[0] >= 1.0 { 0.0 } else { r[0] }, if r[1] >= 1.0 { 0.0 } else { r[1] }];
        if delta == 0.0 {
            return u32::from(r == [0.0, 0.0]);
        }
        let (ex, ey) = (delta * self.extent[0], delta * self.extent[1]);
        let xs = [r[0], r[0] + 1.0];
        let ys = [r[1], r[1] + 1.0];
        let mut n = 0;
        for &x in xs.iter().filter(|&&x| x <= ex) {
            for &y in ys.iter().filter(|&&y| y <= ey) {
                if self.body.contains([self.anchor[0] + x / delta, self.anchor[1] + y / delta]) {
                    n += 1;
                }
            }
        }
        n
    }

    pub fn count(&self, ps: &PointSet, tau: [f64; 2], delta: f64) -> u64 {
        ps.points.iter().map(|&p| u64::from(self.hits(p, tau, delta))).sum()
    }

    pub fn discrepancy(&self, ps: &PointSet, tau: [f64; 2], delta: f64) -> f64 {
        self.count(ps, tau, delta) as f64 - ps.len() as f64 * delta * delta * self.body.area
    }
}

/// D(P, τ + δC) = Σ_p 𝔓{1_{τ+δC}}(p) − Nδ²|C|.
pub fn count_discrepancy(body: &ConvexBody<f64>, ps: &PointSet, tau: [f64; 2], delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return domain(format!("dilation {delta} outside [0, 1]"));
    }
    Ok(CountingFrame::new(body)?.discrepancy(ps, tau, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::pointset::Provenance;

    fn single(p: [f64; 2]) -> PointSet {
        PointSet::new(vec![p], Provenance::new("manual", serde_json::Value::Null, None)).unwrap()
    }

    #[test]
    fn quarter_square_misses_origin() {
        let sq = ConvexBody::square(0.5).unwrap();
        assert_eq!(count_discrepancy(&sq, &single([0.0, 0.0]), [0.25, 0.25], 1.0).unwrap(), -0.25);
        assert_eq!(count_discrepancy(&sq, &single([0.5, 0.5]), [0.25, 0.25], 1.0).unwrap(), 0.75);
        assert!(count_discrepancy(&sq, &single([0.5, 0.5]), [0.0, 0.0], 1.5).is_err());
    }

    #[test]
    fn degenerate_dilation_counts_the_point_itself() {
        let d = ConvexBody::disk(0.25).unwrap();
        assert_eq!(count_discrepancy(&d, &single([0.3, 0.7]), [0.3, 0.7], 0.0).unwrap(), 1.0);
        assert_eq!(count_discrepancy(&d, &single([0.3, 0.7]), [0.3, 0.6], 0.0).unwrap(), 0.0);
    }

    #[test]
    fn unit_square_boundary_hits_wrap() {
        let sq = ConvexBody::square(1.0).unwrap();
        // Interior points are hit once, whatever τ.
        let ps = single([0.3, 0.4]);
        let f = CountingFrame::new(&sq).unwrap();
        for tau in [[0.0, 0.0], [0.7, 0.1]] {
            assert_eq!(f.count(&ps, tau, 1.0), 1);
        }
        // On the boundary the point sits on four corner copies.
        assert_eq!(f.count(&ps, [0.3, 0.4], 1.0), 4);
    }

    #[test]
    fn translation_mean_is_zero() {
        let b = ConvexBody::monomial_body(1.5).unwrap();
        let ps = PointSet::new(
            vec![[0.1, 0.2], [0.7, 0.9], [0.45, 0.05], [0.33, 0.61]],
            Provenance::new("manual", serde_json::Value::Null, None),
        )
        .unwrap();
        let f = CountingFrame::new(&b).unwrap();
        let m = 200;
        let mut acc = 0.0;
        for i in 0..m {
            for j in 0..m {
                acc += f.discrepancy(&ps, [(i as f64 + 0.5) / m as f64, (j as f64 + 0.5) / m as f64], 0.8);
            }
        }
        let mean = acc / (m * m) as f64;
        // Grid error O(N · perimeter / M).
        assert!(mean.abs() < 4.0 * 4.0 / m as f64, "{mean}");
    }
}
