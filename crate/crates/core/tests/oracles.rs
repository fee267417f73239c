use hqd_core::bounds::cm_verify;
use hqd_core::discrepancy::{d2_direct, d2_spectral, d2_spectral_lattice, PointSet, Provenance, Sampler, TailPolicy};
use hqd_core::fourier::SpectralWeightTable;
use hqd_core::geometry::ConvexBody;
use hqd_core::pointsets::{grid_lattice, random_pointset};

#[test]
fn single_point_square_is_17_over_240() {
    let sq = ConvexBody::square(0.5).unwrap();
    let ps = random_pointset(1, 1).unwrap();
    let s = d2_spectral(&sq, &ps, 128, TailPolicy::Warn).unwrap();
    assert!((s.value - 17.0 / 240.0).abs() <= s.error, "{} ± {}", s.value, s.error);
    let d = d2_direct(&sq, &ps, &Sampler::new(400_000, 2)).unwrap();
    assert!((d.value - 17.0 / 240.0).abs() <= 4.0 * d.error);
}

#[test]
fn translation_leaves_d2_unchanged() {
    let b = ConvexBody::monomial_body(1.5).unwrap();
    let ps = random_pointset(16, 4).unwrap();
    let a = d2_spectral(&b, &ps, 64, TailPolicy::Warn).unwrap().value;
    let t = d2_spectral(&b, &ps.translated([0.37, -0.81]), 64, TailPolicy::Warn).unwrap().value;
    assert!((a - t).abs() <= 1e-10 * a);
}

#[test]
fn dual_lattice_evaluator_matches_generic_sum() {
    let b = ConvexBody::disk(0.25).unwrap();
    let (g, l) = (7, 5);
    let ps = grid_lattice(g, l, Provenance::new("grid", serde_json::Value::Null, None)).unwrap();
    let a = d2_spectral(&b, &ps, 70, TailPolicy::Warn).unwrap();
    let c = d2_spectral_lattice(&b, g, l, 70, TailPolicy::Warn).unwrap();
    assert!((a.value - c.value).abs() <= 1e-9 * a.value, "{} vs {}", a.value, c.value);
}

#[test]
fn weight_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let b = ConvexBody::monomial_body(1.8).unwrap();
    let fresh = SpectralWeightTable::cached(&b, 24, Some(dir.path())).unwrap();
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 1);
    let again = SpectralWeightTable::cached(&b, 24, Some(dir.path())).unwrap();
    assert_eq!(fresh, again);
    for m in [[1i64, 0], [-3, 7], [0, -24]] {
        assert_eq!(fresh.get(m), fresh.get([-m[0], -m[1]]));
    }
}

#[test]
fn cassels_montgomery_single_point() {
    let ps = PointSet::new(vec![[0.25, 0.5]], Provenance::new("manual", serde_json::Value::Null, None)).unwrap();
    let s = 5.0;
    let sq = ConvexBody::polygon(vec![[-s, -s], [s, -s], [s, s], [-s, s]]).unwrap();
    let rec = cm_verify(&sq, 0.5, &ps).unwrap();
    assert_eq!(rec.lhs, 120.0);
    assert!(rec.holds && !rec.vacuous);
}

#[test]
fn body_document_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("b.json");
    let b = ConvexBody::glued(&[1.8, 1.2], &[50.0, 5000.0]).unwrap();
    b.save_json(&p).unwrap();
    let c: hqd_core::Body = ConvexBody::load_json(&p).unwrap();
    assert_eq!(b.fingerprint(), c.fingerprint());
    assert_eq!(b.area, c.area);
}
