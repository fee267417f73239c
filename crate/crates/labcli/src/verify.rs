//! Verification suites. Every check records its measured quantity next to
//! the threshold it is held to.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use hqd_core::bounds::{
    cm_bound, cm_verify, phi_weight, uselem_arithmetic, verify_domination, xyz_params, PhiSpec, DOMINATION_SLACK, OMEGA_HALF,
};
use hqd_core::discrepancy::{compare_nested, NestedMethod};
use hqd_core::fourier::{ft_indicator, log_grid, loglog_slope, verify_l1, Frequency};
use hqd_core::geometry::window::grid;
use hqd_core::geometry::{
    check_chord_monotonicity, chord, estimate_windows, predicted_chord_abeta, ChordQuery, ConvexBody, RegimeWindow,
};
use hqd_core::pointsets::random_pointset;
use hqd_core::{Body, Error};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::LabError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: serde_json::Value,
}

fn check(suite: &str, name: impl Into<String>, passed: bool, detail: serde_json::Value) -> Check {
    Check { suite: suite.into(), name: name.into(), passed, detail }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        VerifyReport { checks, passed }
    }
}

/// Ratio band of the L1 comparison.
pub const L1_SPREAD: f64 = 50.0;
/// Regime-1 and regime-2 slope tolerances of the chord law.
pub const AUX_TOL_LAMBDA: f64 = 0.05;
pub const AUX_TOL_THETA: f64 = 0.1;
/// Glued-construction tolerances.
pub const CURVATURE_JUMP: f64 = 1e-8;
pub const TANGENT_JUMP: f64 = 1e-10;
pub const TURNING_TOL: f64 = 1e-9;
pub const CLOSURE_TOL: f64 = 1e-9;

pub fn l1() -> Result<Vec<Check>, LabError> {
    let mut out = Vec::new();
    let disk = ConvexBody::disk(0.25)?;
    let ls = log_grid(1e-3, 1e-1, 20);
    let a = verify_l1(&disk, 0.0, &ls)?;
    let b = verify_l1(&disk, PI / 3.0, &ls)?;
    out.push(check("l1", "disk r=1/4, θ=0", a.spread <= L1_SPREAD, json!({ "spread": a.spread, "bound": L1_SPREAD })));
    let dev = a.points.iter().zip(&b.points).map(|(p, q)| ((p.1 - q.1) / p.1).abs()).fold(0.0, f64::max);
    out.push(check("l1", "disk rotation invariance", dev <= 1e-6 && b.spread <= L1_SPREAD, json!({ "max_relative_difference": dev, "spread": b.spread })));
    let mono = ConvexBody::monomial_body(1.5)?;
    let m = verify_l1(&mono, FRAC_PI_2, &log_grid(1e-4, 1e-2, 20))?;
    out.push(check("l1", "monomial β=1.5, flat normal", m.spread <= L1_SPREAD, json!({ "spread": m.spread, "bound": L1_SPREAD })));
    Ok(out)
}

/// Chord slopes of monomial_body(β) along the flat normal: in λ at θ = 0,
/// and in θ at a depth below the regime edge θ = λ^{(β−1)/β}.
pub fn aux_exponents(beta: f64) -> Result<(f64, f64), Error> {
    let body = ConvexBody::monomial_body(beta)?;
    let ls = log_grid(1e-5, 1e-2, 20);
    let ks = ls.iter().map(|&l| chord(&body, &ChordQuery::new(FRAC_PI_2, l))).collect::<Result<Vec<_>, _>>()?;
    let s1 = loglog_slope(&ls, &ks).0;
    let ts = log_grid(0.02, 0.2, 12);
    let lam = (0.02f64 / 4.0).powf(beta / (beta - 1.0)).max(1e-14);
    let kt = ts.iter().map(|&t| chord(&body, &ChordQuery::new(FRAC_PI_2 + t, lam))).collect::<Result<Vec<_>, _>>()?;
    Ok((s1, loglog_slope(&ts, &kt).0))
}

pub fn aux() -> Result<Vec<Check>, LabError> {
    let mut out = Vec::new();
    for beta in [1.2, 1.5, 1.8] {
        let (s1, s2) = aux_exponents(beta)?;
        let (t1, t2) = (1.0 / beta, (2.0 - beta) / (2.0 * (beta - 1.0)));
        out.push(check("aux", format!("β={beta} slope in λ"), (s1 - t1).abs() <= AUX_TOL_LAMBDA, json!({ "slope": s1, "target": t1, "tolerance": AUX_TOL_LAMBDA })));
        out.push(check("aux", format!("β={beta} slope in θ"), (s2 - t2).abs() <= AUX_TOL_THETA, json!({ "slope": s2, "target": t2, "tolerance": AUX_TOL_THETA })));
        let mut worst = 0.0f64;
        for lam in [1e-6, 1e-4, 1e-2] {
            let edge = f64::powf(lam, (beta - 1.0) / beta);
            let a = predicted_chord_abeta(beta, edge, lam, 1.0, 1.0)?;
            let b = f64::powf(lam, 1.0 / beta);
            worst = worst.max(((a - b) / b).abs());
        }
        out.push(check("aux", format!("β={beta} regime-boundary continuity"), worst <= 1e-12, json!({ "max_relative_jump": worst })));
    }
    Ok(out)
}

/// Construction integrity of a glued or monomial body.
pub fn integrity(name: &str, body: &Body) -> Vec<Check> {
    let mut out = Vec::new();
    let d = body.junction_defects();
    let dk = d.iter().map(|j| j.0).fold(0.0, f64::max);
    let da = d.iter().map(|j| j.1).fold(0.0, f64::max);
    out.push(check("tec1", format!("{name} curvature jumps"), dk <= CURVATURE_JUMP, json!({ "max": dk, "bound": CURVATURE_JUMP, "junctions": d.len() })));
    out.push(check("tec1", format!("{name} tangent jumps"), da <= TANGENT_JUMP, json!({ "max": da, "bound": TANGENT_JUMP })));
    if let Some(c) = body.curve() {
        let cd = c.junction_defects();
        let ck = cd.iter().map(|j| j.0).fold(0.0, f64::max);
        let ca = cd.iter().map(|j| j.1).fold(0.0, f64::max);
        out.push(check("tec1", format!("{name} segment junctions"), ck <= CURVATURE_JUMP && ca <= TANGENT_JUMP, json!({ "curvature": ck, "tangent": ca })));
    }
    let (turning, gap) = body.closure_defects();
    let tdef = (turning - 2.0 * PI).abs();
    out.push(check("tec1", format!("{name} total turning"), tdef <= TURNING_TOL, json!({ "turning": turning, "defect": tdef })));
    out.push(check("tec1", format!("{name} closure gap"), gap <= CLOSURE_TOL * body.diameter, json!({ "gap": gap, "diameter": body.diameter })));
    out
}

/// Factor-2 chord comparison on a 64×64 window grid.
pub fn tec1_grid(name: &str, body: &mut Body) -> Result<Check, LabError> {
    let w = estimate_windows(body)?;
    let th: Vec<f64> = grid(FRAC_PI_2, w.tec1_theta0, 65)[..64].to_vec();
    let ls: Vec<f64> = grid(0.0, w.tec1_lambda0, 65)[1..].to_vec();
    let r = check_chord_monotonicity(body, &th, &ls)?;
    Ok(check(
        "tec1",
        format!("{name} factor-2 chord comparison"),
        r.passed(),
        json!({ "max_ratio": r.max_ratio, "pairs": r.pairs, "theta0": w.tec1_theta0, "lambda0": w.tec1_lambda0 }),
    ))
}

pub fn tec1() -> Result<Vec<Check>, LabError> {
    let mut glued = ConvexBody::glued(&[1.8, 1.2], &[50.0, 5000.0])?;
    let mut out = integrity("glued [1.8, 1.2]", &glued);
    out.push(tec1_grid("glued [1.8, 1.2]", &mut glued)?);
    out.extend(integrity("monomial β=1.5", &ConvexBody::monomial_body(1.5)?));
    let disk = ConvexBody::disk(0.5)?;
    let r = check_chord_monotonicity(&disk, &grid(FRAC_PI_2, 2.0, 16), &grid(0.01, 0.4, 8))?;
    out.push(check("tec1", "disk ratio is 1", (r.max_ratio - 1.0).abs() < 1e-12, json!({ "max_ratio": r.max_ratio })));
    Ok(out)
}

fn centered_square(half: f64) -> Result<Body, Error> {
    ConvexBody::polygon(vec![[-half, -half], [half, -half], [half, half], [-half, half]])
}

/// `sets` random 64-point sets on the side-256 square with r = 2, and the
/// single-point squares [−M, M]² with r = 1/2.
pub fn cm(sets: usize) -> Result<Vec<Check>, LabError> {
    let mut out = Vec::new();
    let mut worst = f64::INFINITY;
    let mut fails = 0;
    let mut vacuous = 0;
    for m in 1..=32 {
        let p = random_pointset(1, 1000 + m)?;
        let rec = cm_verify(&centered_square(m as f64)?, 0.5, &p)?;
        let exact = ((2 * m + 1) * (2 * m + 1) - 1) as f64;
        if !rec.holds || (rec.lhs - exact).abs() > 1e-9 * exact {
            fails += 1;
        }
        vacuous += rec.vacuous as usize;
    }
    out.push(check("cm", "N=1 squares M=1..32", fails == 0, json!({ "failures": fails, "vacuous": vacuous })));
    let region = centered_square(128.0)?;
    let mut vac = 0;
    fails = 0;
    for s in 0..sets {
        let p = random_pointset(64, 5000 + s as u64)?;
        let rec = cm_verify(&region, 2.0, &p)?;
        worst = worst.min(rec.lhs / rec.rhs);
        fails += !rec.holds as usize;
        vac += rec.vacuous as usize;
    }
    out.push(check(
        "cm",
        format!("{sets} random sets, N=64, side 256, r=2"),
        fails == 0 && vac == 0,
        json!({ "failures": fails, "vacuous": vac, "min_lhs_over_rhs": worst, "rhs": cm_bound(256.0 * 256.0, 2.0, 64) }),
    ));
    Ok(out)
}

/// `sets` random sets on nested squares sharing a corner, with
/// η = |A| − |B| ∈ {1e-2, 1e-4}.
pub fn uselem(sets: usize, n: usize, radius: u64) -> Result<Vec<Check>, LabError> {
    let mut out = Vec::new();
    let outer = ConvexBody::square(0.5)?;
    for eta in [1e-2, 1e-4] {
        let inner = ConvexBody::square((0.25f64 - eta).sqrt())?;
        let mut fails = 0;
        let mut worst = 0.0f64;
        for s in 0..sets {
            let p = random_pointset(n, 9000 + s as u64)?;
            let c = compare_nested(&outer, &inner, &p, &NestedMethod::Spectral { radius })?;
            fails += !c.holds as usize;
            worst = worst.max(c.difference / (c.bound + c.slack));
        }
        out.push(check(
            "uselem",
            format!("{sets} random sets, N={n}, η={eta:e}"),
            fails == 0,
            json!({ "failures": fails, "max_difference_over_allowance": worst }),
        ));
    }
    let mut ok = true;
    for n in [1u64, 2, 10, 1000, 1 << 20, u32::MAX as u64] {
        for q in [0u64, 1, 7, 1 << 16] {
            ok &= uselem_arithmetic(n, q).holds;
        }
    }
    out.push(check("uselem", "η=(N+q)^{-4} gives 2N²η^{1/2} ≤ 2 (exact)", ok, json!({})));
    Ok(out)
}

/// Φ range, symmetry, vanishing and the mid-region bound on `scan` random
/// lattice points; X/Y/Z identities; domination slack and its stability.
pub fn domination(scan: usize) -> Result<Vec<Check>, LabError> {
    let mut out = Vec::new();
    let xyz = xyz_params(1 << 12, 1.5, 0.05)?;
    let spec = PhiSpec::new(xyz.x, xyz.y, 2.0)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let reach = spec.x * (1.0 + OMEGA_HALF.tan());
    let k = reach.ceil() as i64 + 4;
    let (mut range_ok, mut sym_ok, mut vanish_ok, mut mid_ok, mut mid_count) = (true, true, true, true, 0usize);
    for _ in 0..scan {
        let m = [rng.gen_range(-k..=k), rng.gen_range(-k..=k)];
        let phi = phi_weight(&spec, m);
        let r = (m[0] as f64).hypot(m[1] as f64);
        range_ok &= (0.0..=2.0 * OMEGA_HALF).contains(&phi);
        sym_ok &= phi == phi_weight(&spec, [-m[0], -m[1]]);
        if r <= spec.rho1 || r > reach {
            vanish_ok &= phi == 0.0;
        }
        if r >= spec.y && r <= spec.x {
            mid_count += 1;
            mid_ok &= phi <= PI * spec.y / (2.0 * r);
        }
    }
    out.push(check("domination", "Φ ∈ [0, 1/5]", range_ok, json!({ "scan": scan })));
    out.push(check("domination", "Φ(m) = Φ(−m)", sym_ok, json!({})));
    out.push(check("domination", "Φ vanishes off (ρ₁, X(1+tan 1/10)]", vanish_ok, json!({})));
    out.push(check("domination", "Φ(m) ≤ πY/(2|m|) for |m| ∈ [Y, X]", mid_ok && mid_count > 0, json!({ "points": mid_count })));
    let mut worst = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let p = xyz_params(rng.gen_range(2..1_000_000_000), rng.gen_range(1.01..2.0), rng.gen_range(0.001..1.0))?;
        let (a, b) = p.identity_defects();
        worst = (worst.0.max(a), worst.1.max(b));
    }
    out.push(check("domination", "XY = N^{1+ε̃} and equalisation", worst.0 <= 1e-9 && worst.1 <= 1e-9, json!({ "product": worst.0, "equalisation": worst.1 })));
    let window = RegimeWindow { index: 1, beta: 1.5, rho_lo: 1.0, rho_hi: f64::INFINITY, theta_max: OMEGA_HALF };
    let a = verify_domination(&spec, &xyz, 1.5, &window)?;
    let xyz4 = xyz_params(1 << 14, 1.5, 0.05)?;
    let b = verify_domination(&PhiSpec::new(xyz4.x, xyz4.y, 2.0)?, &xyz4, 1.5, &window)?;
    out.push(check(
        "domination",
        "β=1.5, N=2^12, ε̃=0.05 worst slack",
        a.passed,
        json!({ "worst_slack": a.worst_slack, "at": a.worst_m, "threshold": DOMINATION_SLACK, "scanned": a.scanned }),
    ));
    out.push(check(
        "domination",
        "stability at 4N",
        b.worst_slack <= 2.0 * a.worst_slack,
        json!({ "slack_n": a.worst_slack, "slack_4n": b.worst_slack }),
    ));
    Ok(out)
}

/// Invariants of every body document in a directory.
pub fn corpus(dir: &Path) -> Result<Vec<Check>, LabError> {
    let mut out = Vec::new();
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| LabError::Usage(format!("corpus {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.file_name().is_some_and(|n| n.to_string_lossy().starts_with("body")))
        .collect();
    files.sort();
    for f in files {
        let name = f.file_name().unwrap_or_default().to_string_lossy().to_string();
        let mut body = ConvexBody::load_json(&f).map_err(|e| LabError::file(&f, e))?;
        let ft0 = ft_indicator(&body, &Frequency::continuous([0.0, 0.0]))?.re;
        let widths_ok = (0..720).all(|i| body.width(PI * i as f64 / 360.0) > 0.0);
        let sym_ok = !body.central
            || (0..360).all(|i| {
                let t = PI * i as f64 / 180.0;
                let c = body.center;
                let (a, b) = (body.support(t), body.support(t + PI));
                let shift = c[0] * t.cos() + c[1] * t.sin();
                ((a - shift) - (b + shift)).abs() <= 1e-10
            });
        out.push(check(
            "corpus",
            format!("{name} basic invariants"),
            body.area > 0.0 && ft0 == body.area && widths_ok && sym_ok,
            json!({ "area": body.area, "diameter": body.diameter, "central": body.central }),
        ));
        if body.is_curve_backed() {
            out.extend(integrity(&name, &body));
            out.push(tec1_grid(&name, &mut body)?);
        }
    }
    Ok(out)
}

pub fn all(corpus_dir: Option<&Path>) -> Result<VerifyReport, LabError> {
    let mut checks = Vec::new();
    checks.extend(l1()?);
    checks.extend(aux()?);
    checks.extend(tec1()?);
    checks.extend(cm(100)?);
    checks.extend(uselem(10, 16, 48)?);
    checks.extend(domination(10_000)?);
    if let Some(d) = corpus_dir {
        checks.extend(corpus(d)?);
    }
    Ok(VerifyReport::new(checks))
}
