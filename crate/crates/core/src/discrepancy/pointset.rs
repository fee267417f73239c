//! N-point multisets in [0, 1)² with their provenance.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::atomic_write;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(generator: impl Into<String>, params: serde_json::Value, seed: Option<u64>) -> Self {
        Provenance { generator: generator.into(), params, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<[f64; 2]>,
    pub provenance: Provenance,
}

impl PointSet {
    /// Validates N ≥ 1 and coordinates in [0, 1).
    pub fn new(points: Vec<[f64; 2]>, provenance: Provenance) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("a point set needs at least one point".into()));
        }
        if let Some(p) = points.iter().find(|p| !p.iter().all(|c| (0.0..1.0).contains(c))) {
            return Err(Error::Domain(format!("point ({}, {}) outside [0, 1)²", p[0], p[1])));
        }
        Ok(PointSet { points, provenance })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Common shift modulo 1.
    pub fn translated(&self, v: [f64; 2]) -> Self {
        let points = self
            .points
            .iter()
            .map(|p| {
                let f = |x: f64| {
                    let r = x.rem_euclid(1.0);
                    if r >= 1.0 { 0.0 } else { r }
                };
                [f(p[0] + v[0]), f(p[1] + v[1])]
            })
            .collect();
        let mut provenance = self.provenance.clone();
        provenance.params = serde_json::json!({ "base": self.provenance.params, "shift": v });
        PointSet { points, provenance }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x", "y"]).map_err(fmt)?;
        for p in &self.points {
            w.write_record([format!("{:?}", p[0]), format!("{:?}", p[1])]).map_err(fmt)?;
        }
        w.into_inner().map_err(|e| Error::Format(e.to_string()))
    }

    /// Reads `x,y` rows; a header row is optional.
    pub fn from_csv(bytes: &[u8], provenance: Provenance) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(bytes);
        let mut pts = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(fmt)?;
            if rec.len() != 2 {
                return Err(Error::Format(format!("row {}: expected 2 columns", i + 1)));
            }
            match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
                (Ok(x), Ok(y)) => pts.push([x, y]),
                _ if i == 0 => continue,
                _ => return Err(Error::Format(format!("row {}: not a number pair", i + 1))),
            }
        }
        PointSet::new(pts, provenance)
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        atomic_write(path, &self.to_csv()?)
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        atomic_write(path, &serde_json::to_vec_pretty(self).map_err(|e| Error::Format(e.to_string()))?)
    }

    /// JSON with provenance, or CSV by extension.
    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            let ps: PointSet = serde_json::from_slice(&bytes).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
            PointSet::new(ps.points, ps.provenance)
        } else {
            let prov = Provenance::new("csv", serde_json::json!({ "path": path.display().to_string() }), None);
            PointSet::from_csv(&bytes, prov)
        }
    }
}

fn fmt(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let prov = Provenance::new("manual", serde_json::Value::Null, None);
        let ps = PointSet::new(vec![[0.1, 0.2], [1.0 / 3.0, 0.999999999999], [0.0, 0.5]], prov.clone()).unwrap();
        let back = PointSet::from_csv(&ps.to_csv().unwrap(), prov).unwrap();
        assert_eq!(ps.points, back.points);
        assert!(PointSet::new(vec![[1.0, 0.0]], ps.provenance.clone()).is_err());
        assert!(PointSet::new(vec![], ps.provenance.clone()).is_err());
        let t = ps.translated([0.9, -0.5]);
        assert!(t.points.iter().all(|p| p.iter().all(|c| (0.0..1.0).contains(c))));
    }
}
