//! Local-slope windows of D₂ for a glued body. Each segment exponent β_i
//! gets its anisotropic lattice family; the witness at N is the smallest
//! family value, read off each family's curve by log–log interpolation.

use std::path::Path;

use hqd_core::geometry::window::geometric_regime_windows;
use hqd_core::geometry::{ConvexBody, RegimeWindow};
use hqd_core::pointsets::alpha_for_beta;
use hqd_core::Error;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{MethodSpec, PointFamily, Schedule};
use crate::fit::fit_slope;
use crate::plot::{loglog_svg, Series};
use crate::report::{write_csv, write_json};
use crate::scaling::{evaluate, ScalingRecord};
use crate::LabError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationConfig {
    pub name: String,
    pub betas: Vec<f64>,
    pub ks: Vec<f64>,
    pub schedule: Schedule,
    #[serde(default = "default_factor")]
    pub radius_factor: u64,
    /// Points per local fit.
    #[serde(default = "default_span")]
    pub span: usize,
    /// Largest spread of local slopes inside one window.
    #[serde(default = "default_stability")]
    pub stability: f64,
    /// Fewest local fits a window must hold.
    #[serde(default = "default_min_fits")]
    pub min_fits: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_factor() -> u64 {
    8
}
fn default_span() -> usize {
    4
}
fn default_stability() -> f64 {
    0.03
}
fn default_min_fits() -> usize {
    2
}
fn default_tolerance() -> f64 {
    0.1
}

impl OscillationConfig {
    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::file(path, Error::Io(e)))?;
        let cfg: Self = serde_json::from_str(&text).map_err(|e| LabError::Usage(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        if self.betas.is_empty() || self.betas.len() != self.ks.len() {
            return Err(LabError::Usage("betas and ks must be nonempty and of equal length".into()));
        }
        let ns = self.schedule.values();
        if ns.len() < self.span + 1 || ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::Usage(format!("schedule needs more than {} strictly increasing values", self.span)));
        }
        if self.span < 3 {
            return Err(LabError::Usage("span must be at least 3".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalSlope {
    pub n_lo: f64,
    pub n_hi: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoundWindow {
    pub n_lo: f64,
    pub n_hi: f64,
    pub fits: usize,
    pub slope: f64,
    /// Segment whose target is nearest, 1-based.
    pub segment: usize,
    pub target: f64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub config: OscillationConfig,
    pub targets: Vec<f64>,
    /// Radial windows where each segment governs the chords.
    pub geometric_windows: Vec<RegimeWindow>,
    pub families: Vec<(f64, Vec<ScalingRecord>)>,
    pub witness: Vec<(f64, f64)>,
    pub local_slopes: Vec<LocalSlope>,
    pub windows: Vec<FoundWindow>,
    /// Every segment has a matching window, in segment order.
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

/// log–log interpolation of a sorted curve; None outside its span.
const END_REACH: f64 = 1.25;

/// Log–log interpolation; the end segments extend by `END_REACH` so a
/// nominal N slightly above or below the realised cardinality still maps.
fn interpolate(curve: &[(f64, f64)], n: f64) -> Option<f64> {
    let (first, last) = (curve.first()?.0, curve.last()?.0);
    if curve.len() < 2 || n < first / END_REACH || n > last * END_REACH {
        return None;
    }
    let i = curve.windows(2).position(|w| n <= w[1].0).unwrap_or(curve.len() - 2);
    let ((x0, y0), (x1, y1)) = (curve[i], curve[i + 1]);
    if x1 == x0 {
        return Some(y0);
    }
    let t = (n.ln() - x0.ln()) / (x1.ln() - x0.ln());
    Some((y0.ln() + t * (y1.ln() - y0.ln())).exp())
}

/// Maximal runs of local slopes whose spread stays within `stability`.
pub fn discover_windows(slopes: &[LocalSlope], targets: &[f64], stability: f64, min_fits: usize, tolerance: f64) -> Vec<FoundWindow> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < slopes.len() {
        let (mut lo, mut hi) = (slopes[i].slope, slopes[i].slope);
        let mut j = i + 1;
        while j < slopes.len() {
            let s = slopes[j].slope;
            if s.max(hi) - s.min(lo) > stability {
                break;
            }
            lo = lo.min(s);
            hi = hi.max(s);
            j += 1;
        }
        if j - i >= min_fits {
            let slope = slopes[i..j].iter().map(|s| s.slope).sum::<f64>() / (j - i) as f64;
            let (k, t) = targets
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - slope).abs().total_cmp(&(b.1 - slope).abs()))
                .map(|(k, t)| (k, *t))
                .unwrap_or((0, f64::NAN));
            out.push(FoundWindow {
                n_lo: slopes[i].n_lo,
                n_hi: slopes[j - 1].n_hi,
                fits: j - i,
                slope,
                segment: k + 1,
                target: t,
                matches: (slope - t).abs() <= tolerance,
            });
        }
        i = j;
    }
    out
}

/// Segment i needs a matching window, later segments at larger N.
fn windows_pass(windows: &[FoundWindow], segments: usize) -> bool {
    let mut last = 0.0;
    for seg in 1..=segments {
        match windows.iter().find(|w| w.segment == seg && w.matches && w.n_lo >= last) {
            Some(w) => last = w.n_lo,
            None => return false,
        }
    }
    true
}

pub fn run_oscillation_demo(cfg: &OscillationConfig) -> Result<OscillationReport, LabError> {
    cfg.validate()?;
    let body = ConvexBody::glued(&cfg.betas, &cfg.ks)?;
    let geometric_windows = geometric_regime_windows(&body)?;
    let targets: Vec<f64> = cfg.betas.iter().map(|&b| alpha_for_beta(b)).collect();
    let mut betas = cfg.betas.clone();
    betas.sort_by(f64::total_cmp);
    betas.dedup();
    let ns = cfg.schedule.values();
    let method = MethodSpec::Spectral { radius: None, radius_factor: Some(cfg.radius_factor) };
    let jobs: Vec<(f64, u64)> = betas.iter().flat_map(|&b| ns.iter().map(move |&n| (b, n))).collect();
    let results: Vec<Result<ScalingRecord, LabError>> =
        jobs.par_iter().map(|&(b, n)| evaluate(&body, &PointFamily::Anisotropic { beta: b }, &method, n, 0)).collect();
    let mut families: Vec<(f64, Vec<ScalingRecord>)> = betas.iter().map(|&b| (b, Vec::new())).collect();
    for ((b, _), r) in jobs.iter().zip(results) {
        let rec = r?;
        families.iter_mut().find(|f| f.0 == *b).expect("family exists").1.push(rec);
    }
    for f in &mut families {
        f.1.sort_by_key(|r| r.n);
        f.1.dedup_by_key(|r| r.n);
    }
    let curves: Vec<Vec<(f64, f64)>> = families.iter().map(|f| f.1.iter().map(|r| (r.n as f64, r.value)).collect()).collect();
    let witness: Vec<(f64, f64)> = ns
        .iter()
        .filter_map(|&n| {
            let vals: Vec<f64> = curves.iter().filter_map(|c| interpolate(c, n as f64)).collect();
            (vals.len() == curves.len()).then(|| (n as f64, vals.into_iter().fold(f64::INFINITY, f64::min)))
        })
        .collect();
    let mut diagnostics = Vec::new();
    let mut local_slopes = Vec::new();
    for w in witness.windows(cfg.span) {
        if let Ok(f) = fit_slope(w) {
            local_slopes.push(LocalSlope { n_lo: w[0].0, n_hi: w[cfg.span - 1].0, slope: f.slope });
        }
    }
    let windows = discover_windows(&local_slopes, &targets, cfg.stability, cfg.min_fits, cfg.tolerance);
    let passed = windows_pass(&windows, cfg.betas.len());
    if windows.is_empty() {
        diagnostics.push("no stable local-slope window found".into());
    }
    for (i, t) in targets.iter().enumerate() {
        if !windows.iter().any(|w| w.segment == i + 1 && w.matches) {
            diagnostics.push(format!("segment {} (β = {}, target {t:.4}): window not found", i + 1, cfg.betas[i]));
        }
    }
    // Frequencies probed by the lattices, against the radial windows.
    if let (Some(first), Some(last)) = (families.first().and_then(|f| f.1.first()), families.first().and_then(|f| f.1.last())) {
        let l = |r: &ScalingRecord| r.lattice.map_or(0, |(g, l)| g.min(l));
        diagnostics.push(format!("shortest dual vectors span |m| ∈ [{}, {}]", l(first), l(last)));
    }
    for w in &geometric_windows {
        diagnostics.push(format!("segment {} governs ρ ∈ [{:.1}, {:.1}]", w.index, w.rho_lo, w.rho_hi));
    }
    Ok(OscillationReport { config: cfg.clone(), targets, geometric_windows, families, witness, local_slopes, windows, passed, diagnostics })
}

impl OscillationReport {
    pub fn write(&self, dir: &Path) -> Result<(), Error> {
        std::fs::create_dir_all(dir)?;
        write_json(&dir.join("report.json"), self)?;
        let rows: Vec<Vec<String>> = self.witness.iter().map(|(n, v)| vec![format!("{n}"), format!("{v:e}")]).collect();
        write_csv(&dir.join("witness.csv"), &["n", "d2"], &rows)?;
        let curves: Vec<(String, Vec<(f64, f64)>)> = self
            .families
            .iter()
            .map(|(b, recs)| (format!("lattice β = {b}"), recs.iter().map(|r| (r.n as f64, r.value)).collect()))
            .collect();
        let colors = ["#06c", "#c60", "#090", "#909"];
        let mut series: Vec<Series> = curves
            .iter()
            .enumerate()
            .map(|(i, (label, pts))| Series { label, points: pts, color: colors[i % colors.len()] })
            .collect();
        series.push(Series { label: "witness", points: &self.witness, color: "#000" });
        let svg = loglog_svg(&self.config.name, "N", "D2", &series, None);
        hqd_core::io::atomic_write(&dir.join("plot.svg"), svg.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slopes(v: &[f64]) -> Vec<LocalSlope> {
        v.iter().enumerate().map(|(i, &s)| LocalSlope { n_lo: (i + 1) as f64, n_hi: (i + 4) as f64, slope: s }).collect()
    }

    #[test]
    fn two_plateaus_give_two_windows_in_order() {
        let s = slopes(&[0.49, 0.485, 0.488, 0.46, 0.43, 0.428, 0.431]);
        let w = discover_windows(&s, &[0.486, 0.429], 0.01, 2, 0.1);
        assert_eq!(w.len(), 2);
        assert_eq!((w[0].segment, w[1].segment), (1, 2));
        assert!(windows_pass(&w, 2));
        // Reversed order fails.
        let s = slopes(&[0.43, 0.428, 0.431, 0.46, 0.49, 0.485, 0.488]);
        assert!(!windows_pass(&discover_windows(&s, &[0.486, 0.429], 0.01, 2, 0.1), 2));
    }

    #[test]
    fn single_plateau_is_one_window() {
        let s = slopes(&[0.48, 0.482, 0.479, 0.481]);
        let w = discover_windows(&s, &[0.486], 0.01, 2, 0.1);
        assert_eq!(w.len(), 1);
        assert!(windows_pass(&w, 1));
    }

    #[test]
    fn interpolation_is_exact_on_powers() {
        let c: Vec<(f64, f64)> = [10.0f64, 100.0, 1000.0].iter().map(|&n| (n, n.powf(0.4))).collect();
        assert!((interpolate(&c, 300.0).unwrap() - 300f64.powf(0.4)).abs() < 1e-12);
        assert!(interpolate(&c, 5.0).is_none());
    }
}
