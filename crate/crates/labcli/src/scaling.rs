//! N-sweeps of D₂ over a point family with global slope fits.

use std::path::Path;

use hqd_core::discrepancy::{d2_direct, d2_spectral_cached, d2_spectral_lattice, D2Estimate, Sampler, TailPolicy};
use hqd_core::{Body, Error};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, MethodSpec, PointFamily, Schedule, Target};
use crate::fit::{fit_slope, SlopeFit};
use crate::plot::{loglog_svg, Line, Series};
use crate::report::{write_csv, write_json};
use crate::LabError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRecord {
    /// Requested N.
    pub nominal: u64,
    /// Cardinality of the generated set.
    pub n: u64,
    pub value: f64,
    pub error: f64,
    pub lattice: Option<(u64, u64)>,
    pub estimate: D2Estimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogBand {
    pub min: f64,
    pub max: f64,
    pub ratio: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSlope {
    pub n_lo: u64,
    pub n_hi: u64,
    /// None when the window holds fewer than four records.
    pub fit: Option<SlopeFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    /// Fully resolved configuration, for replay.
    pub config: ExperimentConfig,
    pub records: Vec<ScalingRecord>,
    pub fit: Option<SlopeFit>,
    pub target: Option<Target>,
    pub log_band: Option<LogBand>,
    pub passed: Option<bool>,
    /// Local fits over each [N_i, N_i + q_i] of a windowed schedule.
    #[serde(default)]
    pub window_slopes: Vec<WindowSlope>,
    /// Some N failed (budget, accuracy); the report covers the rest.
    pub partial: bool,
    pub failures: Vec<(u64, String)>,
}

/// D₂ of one generated set. Lattices use the dual-lattice evaluator.
pub fn evaluate(body: &Body, family: &PointFamily, method: &MethodSpec, n: u64, seed: u64) -> Result<ScalingRecord, LabError> {
    let g = family.generate(n, seed)?;
    let estimate = match (*method, g.lattice) {
        (MethodSpec::Direct { samples }, _) => d2_direct(body, &g.points, &Sampler::new(samples, seed))?,
        (MethodSpec::Spectral { radius, radius_factor }, Some((gg, ll))) => {
            let r = radius.unwrap_or_else(|| radius_factor.unwrap_or(16) * gg.max(ll));
            d2_spectral_lattice(body, gg, ll, r, TailPolicy::Warn)?
        }
        (MethodSpec::Spectral { radius, .. }, None) => {
            let r = radius.ok_or_else(|| LabError::Usage("non-lattice family needs an explicit radius".into()))?;
            d2_spectral_cached(body, &g.points, r, None, TailPolicy::Warn)?
        }
    };
    Ok(ScalingRecord {
        nominal: n,
        n: g.points.len() as u64,
        value: estimate.value,
        error: estimate.error,
        lattice: g.lattice,
        estimate,
    })
}

pub(crate) fn judge(records: &[ScalingRecord], target: Option<Target>) -> (Option<SlopeFit>, Option<LogBand>, Option<bool>) {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.value)).collect();
    let fit = fit_slope(&pts).ok();
    let band = target.and_then(|t| t.log_band).and_then(|bound| {
        let ratios: Vec<f64> = records.iter().filter(|r| r.n > 1).map(|r| r.value / (r.n as f64).ln()).collect();
        if ratios.is_empty() {
            return None;
        }
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(LogBand { min, max, ratio: max / min, bound, passed: max / min <= bound })
    });
    let passed = target.map(|t| {
        let slope_ok = t.exponent.map_or(true, |e| fit.is_some_and(|f| (f.slope - e).abs() <= t.tolerance));
        slope_ok && band.map_or(true, |b| b.passed)
    });
    (fit, band, passed)
}

pub fn run_scaling(config: &ExperimentConfig) -> Result<ScalingReport, LabError> {
    config.validate()?;
    let body = config.body.build()?;
    let ns = config.schedule.values();
    let results: Vec<(u64, Result<ScalingRecord, LabError>)> = ns
        .par_iter()
        .map(|&n| (n, evaluate(&body, &config.points, &config.method, n, config.seed)))
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (n, r) in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(LabError::Core(e @ (Error::Budget(_) | Error::Accuracy { .. }))) => failures.push((n, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    records.sort_by_key(|r| r.n);
    let (fit, log_band, passed) = judge(&records, config.target);
    let window_slopes = match &config.schedule {
        Schedule::Windows { windows, .. } => windows
            .iter()
            .map(|w| {
                let pts: Vec<(f64, f64)> =
                    records.iter().filter(|r| r.nominal >= w.n && r.nominal <= w.n + w.q).map(|r| (r.n as f64, r.value)).collect();
                WindowSlope { n_lo: w.n, n_hi: w.n + w.q, fit: fit_slope(&pts).ok() }
            })
            .collect(),
        _ => Vec::new(),
    };
    Ok(ScalingReport {
        config: config.clone(),
        partial: !failures.is_empty(),
        records,
        fit,
        target: config.target,
        log_band,
        passed,
        window_slopes,
        failures,
    })
}

impl ScalingReport {
    /// report.json, records.csv and plot.svg under `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), Error> {
        std::fs::create_dir_all(dir)?;
        write_json(&dir.join("report.json"), self)?;
        let rows: Vec<Vec<String>> = self
            .records
            .iter()
            .map(|r| vec![r.n.to_string(), format!("{:e}", r.value), format!("{:e}", r.error)])
            .collect();
        write_csv(&dir.join("records.csv"), &["n", "d2", "error"], &rows)?;
        let pts: Vec<(f64, f64)> = self.records.iter().map(|r| (r.n as f64, r.value)).collect();
        let line = self.fit.map(|f| Line { slope: f.slope, intercept: f.intercept, label: format!("slope {:.4} ± {:.4}", f.slope, f.band) });
        let svg = loglog_svg(&self.config.name, "N", "D2", &[Series { label: "D2", points: &pts, color: "#06c" }], line.as_ref());
        hqd_core::io::atomic_write(&dir.join("plot.svg"), svg.as_bytes())
    }
}
