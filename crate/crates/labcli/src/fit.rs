//! Least-squares slopes on (log N, log D₂).

use hqd_core::Error;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Half-width of the 95% confidence interval of the slope.
    pub band: f64,
    pub points: usize,
}

/// OLS of log y on log x; the band comes from the residual variance.
pub fn fit_slope(records: &[(f64, f64)]) -> Result<SlopeFit, Error> {
    if records.len() < 4 {
        return Err(Error::Degenerate(format!("slope fit needs at least 4 records, got {}", records.len())));
    }
    if let Some(bad) = records.iter().find(|r| !(r.0 > 0.0 && r.1 > 0.0)) {
        return Err(Error::Degenerate(format!("nonpositive record ({}, {})", bad.0, bad.1)));
    }
    let n = records.len() as f64;
    let lx: Vec<f64> = records.iter().map(|r| r.0.ln()).collect();
    let ly: Vec<f64> = records.iter().map(|r| r.1.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all abscissae coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let dof = n - 2.0;
    let se = (rss / dof / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof).map_err(|e| Error::Degenerate(e.to_string()))?.inverse_cdf(0.975);
    Ok(SlopeFit { slope, intercept, band: t * se, points: records.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        (6..=16).map(|e| (1u64 << e) as f64).collect()
    }

    #[test]
    fn exact_power_law() {
        let r: Vec<(f64, f64)> = grid().into_iter().map(|n| (n, n.powf(0.45))).collect();
        let f = fit_slope(&r).unwrap();
        assert!((f.slope - 0.45).abs() < 1e-12 && f.band < 1e-10);
    }

    #[test]
    fn constant_has_zero_slope() {
        let r: Vec<(f64, f64)> = grid().into_iter().map(|n| (n, 3.0)).collect();
        assert!(fit_slope(&r).unwrap().slope.abs() < 1e-14);
    }

    #[test]
    fn logarithm_masquerades_as_a_small_power() {
        let r: Vec<(f64, f64)> = grid().into_iter().map(|n| (n, n.ln())).collect();
        let f = fit_slope(&r).unwrap();
        assert!(f.slope > 0.1 && f.slope < 0.15, "{}", f.slope);
    }

    #[test]
    fn rejects_short_or_nonpositive() {
        assert!(fit_slope(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).is_err());
        assert!(fit_slope(&[(1.0, 1.0), (2.0, 2.0), (3.0, 0.0), (4.0, 1.0)]).is_err());
    }
}
