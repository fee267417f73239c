//! Spectral weights w(m) for all nonzero m with |m| ≤ R, stored once per
//! symmetry class and persisted to a binary cache with a JSON sidecar.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::power::{NodeBank, WeightValue, WEIGHT_TARGET};
use super::transform::Frequency;
use crate::error::{domain, Error, Result};
use crate::geometry::{ConvexBody, Variant};
use crate::io::atomic_write;

const MAGIC: &[u8; 4] = b"HQDW";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 8 + 8 + 8;
const RECORD_LEN: usize = 32;
/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "HQD_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".hqd-cache";

/// Symmetry group used to pick class representatives. Conjugate symmetry
/// w(m) = w(−m) holds for every body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// w depends on |m|² only.
    Radial,
    /// Mirror and swap: (max, min) of |m₁|, |m₂|.
    Dihedral,
    /// Mirror in the vertical axis: (|m₁|, |m₂|).
    Axis,
    /// Coordinate swap: orbit of {m, −m, m*, −m*}.
    Diagonal,
    Central,
}

impl Symmetry {
    pub fn of(body: &ConvexBody<f64>) -> Self {
        match (&body.variant, body.axis, body.diagonal) {
            (Variant::Disk { .. }, _, _) => Symmetry::Radial,
            (_, true, true) => Symmetry::Dihedral,
            (_, true, false) => Symmetry::Axis,
            (_, false, true) => Symmetry::Diagonal,
            _ => Symmetry::Central,
        }
    }

    fn tag(self) -> u64 {
        match self {
            Symmetry::Radial => 0,
            Symmetry::Dihedral => 1,
            Symmetry::Axis => 2,
            Symmetry::Diagonal => 3,
            Symmetry::Central => 4,
        }
    }

    fn from_tag(t: u64) -> Result<Self> {
        Ok(match t {
            0 => Symmetry::Radial,
            1 => Symmetry::Dihedral,
            2 => Symmetry::Axis,
            3 => Symmetry::Diagonal,
            4 => Symmetry::Central,
            _ => return Err(Error::Format(format!("unknown symmetry tag {t}"))),
        })
    }

    /// Class key of m. Radial keys are (|m|², 0).
    pub fn key(self, m: [i64; 2]) -> [i64; 2] {
        let [a, b] = m;
        match self {
            Symmetry::Radial => [a * a + b * b, 0],
            Symmetry::Dihedral => [a.abs().max(b.abs()), a.abs().min(b.abs())],
            Symmetry::Axis => [a.abs(), b.abs()],
            _ => self.orbit(m).into_iter().max().unwrap(),
        }
    }

    /// Images of m under the group (m itself for the radial case, whose
    /// weights do not depend on the direction).
    pub fn orbit(self, m: [i64; 2]) -> Vec<[i64; 2]> {
        let [a, b] = m;
        match self {
            Symmetry::Radial => vec![m],
            Symmetry::Dihedral => vec![[a, b], [-a, b], [a, -b], [-a, -b], [b, a], [-b, a], [b, -a], [-b, -a]],
            Symmetry::Axis => vec![[a, b], [-a, b], [a, -b], [-a, -b]],
            Symmetry::Diagonal => vec![[a, b], [-a, -b], [b, a], [-b, -a]],
            Symmetry::Central => vec![[a, b], [-a, -b]],
        }
    }

    /// The vector whose weight stands for the class: the smallest image.
    pub fn representative(self, m: [i64; 2]) -> [i64; 2] {
        self.orbit(m).into_iter().min().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralWeightTable {
    pub fingerprint: String,
    pub radius: u64,
    pub symmetry: Symmetry,
    /// Class key → weight of any vector in the class.
    pub classes: BTreeMap<[i64; 2], WeightValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Sidecar {
    fingerprint: String,
    radius: u64,
    symmetry: Symmetry,
    classes: usize,
    version: u32,
    record_file: String,
    weight_target: f64,
}

/// Shell index ⌈|m|⌉ computed exactly.
pub fn shell_of(m: [i64; 2]) -> u64 {
    let n2 = (m[0] * m[0] + m[1] * m[1]) as u64;
    let mut k = (n2 as f64).sqrt().ceil() as u64;
    while k > 0 && (k - 1) * (k - 1) >= n2 {
        k -= 1;
    }
    while k * k < n2 {
        k += 1;
    }
    k
}

/// Weight of m as stored in any table: evaluated at the class
/// representative with nodes built for the shell radius, so tables and
/// direct lattice sums agree bit for bit.
pub fn class_weight(body: &ConvexBody<f64>, sym: Symmetry, m: [i64; 2]) -> Result<WeightValue> {
    let rep = sym.representative(m);
    NodeBank::new(body, shell_of(rep) as f64).weight(&Frequency::lattice(rep))
}

/// Lattice vectors with 0 < |m| ≤ R, grouped by shell ⌈|m|⌉.
pub(crate) fn shells(r: u64) -> Vec<Vec<[i64; 2]>> {
    let ri = r as i64;
    let r2 = ri * ri;
    let mut out = vec![Vec::new(); r as usize];
    for a in -ri..=ri {
        for b in -ri..=ri {
            let n2 = a * a + b * b;
            if n2 == 0 || n2 > r2 {
                continue;
            }
            out[(shell_of([a, b]) - 1) as usize].push([a, b]);
        }
    }
    out
}

fn representative_per_class(sym: Symmetry, shell: &[[i64; 2]]) -> Vec<([i64; 2], [i64; 2])> {
    let mut seen = BTreeMap::new();
    for &m in shell {
        seen.entry(sym.key(m)).or_insert_with(|| sym.representative(m));
    }
    seen.into_iter().collect()
}

impl SpectralWeightTable {
    /// Computes the table; shells run in parallel and merge in shell order.
    pub fn compute(body: &ConvexBody<f64>, radius: u64) -> Result<Self> {
        if radius < 1 {
            return domain("truncation radius must be at least 1");
        }
        let sym = Symmetry::of(body);
        let results: Vec<Result<Vec<([i64; 2], WeightValue)>>> = shells(radius)
            .into_par_iter()
            .enumerate()
            .map(|(i, shell)| {
                let mut bank = NodeBank::new(body, (i + 1) as f64);
                let reps = representative_per_class(sym, &shell);
                let mut out = Vec::with_capacity(reps.len());
                let (mut failed, mut worst) = (0usize, 0.0f64);
                for (k, m) in reps {
                    match bank.weight(&Frequency::lattice(m)) {
                        Ok(w) => out.push((k, w)),
                        Err(Error::Accuracy { achieved, .. }) => {
                            failed += 1;
                            worst = worst.max(achieved);
                        }
                        Err(e) => return Err(e),
                    }
                }
                if failed > 0 {
                    return Err(Error::Accuracy { target: WEIGHT_TARGET, achieved: worst });
                }
                Ok(out)
            })
            .collect();
        let mut classes = BTreeMap::new();
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(v) => classes.extend(v),
                Err(Error::Accuracy { target, achieved }) => {
                    return Err(Error::Format(format!(
                        "shell {} (|m| ∈ ({i}, {}]): weight accuracy {target:e} not met, worst estimate {achieved:e}",
                        i + 1,
                        i + 1
                    )))
                }
                Err(e) => return Err(e),
            }
        }
        Ok(SpectralWeightTable { fingerprint: body.fingerprint(), radius, symmetry: sym, classes })
    }

    /// Loads from the cache directory if present, else computes and stores.
    pub fn cached(body: &ConvexBody<f64>, radius: u64, dir: Option<&Path>) -> Result<Self> {
        let dir = dir.map(Path::to_path_buf).unwrap_or_else(cache_dir);
        let path = dir.join(cache_file_name(&body.fingerprint(), radius));
        if path.exists() {
            let t = Self::load(&path)?;
            if t.fingerprint == body.fingerprint() && t.radius == radius {
                return Ok(t);
            }
        }
        let t = Self::compute(body, radius)?;
        t.save(&path)?;
        Ok(t)
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// w(m) for 0 < |m| ≤ R.
    pub fn get(&self, m: [i64; 2]) -> Option<WeightValue> {
        let n2 = m[0] * m[0] + m[1] * m[1];
        if n2 == 0 || n2 as u128 > (self.radius as u128).pow(2) {
            return None;
        }
        self.classes.get(&self.symmetry.key(m)).copied()
    }

    /// Every lattice vector of the disk with its weight, in row order.
    pub fn expand(&self) -> Vec<([i64; 2], WeightValue)> {
        let r = self.radius as i64;
        let mut out = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                if let Some(w) = self.get([a, b]) {
                    out.push(([a, b], w));
                }
            }
        }
        out
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut b = Vec::with_capacity(HEADER_LEN + RECORD_LEN * self.classes.len());
        b.extend_from_slice(MAGIC);
        b.extend_from_slice(&VERSION.to_le_bytes());
        b.extend_from_slice(&self.radius.to_le_bytes());
        b.extend_from_slice(&(self.classes.len() as u64).to_le_bytes());
        b.extend_from_slice(&self.symmetry.tag().to_le_bytes());
        for (k, w) in &self.classes {
            b.extend_from_slice(&k[0].to_le_bytes());
            b.extend_from_slice(&k[1].to_le_bytes());
            b.extend_from_slice(&w.w.to_le_bytes());
            b.extend_from_slice(&w.err.to_le_bytes());
        }
        b
    }

    pub fn from_bytes(fingerprint: String, b: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Format(format!("weight cache: {m}"));
        if b.len() < HEADER_LEN || &b[..4] != MAGIC {
            return Err(bad("missing header"));
        }
        let u32_at = |o: usize| u32::from_le_bytes(b[o..o + 4].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(b[o..o + 8].try_into().unwrap());
        if u32_at(4) != VERSION {
            return Err(bad("unsupported version"));
        }
        let radius = u64_at(8);
        let count = u64_at(16) as usize;
        let symmetry = Symmetry::from_tag(u64_at(24))?;
        if b.len() != HEADER_LEN + count * RECORD_LEN {
            return Err(bad("record count does not match length"));
        }
        let mut classes = BTreeMap::new();
        for i in 0..count {
            let o = HEADER_LEN + i * RECORD_LEN;
            let k = [u64_at(o) as i64, u64_at(o + 8) as i64];
            let w = f64::from_bits(u64_at(o + 16));
            let err = f64::from_bits(u64_at(o + 24));
            classes.insert(k, WeightValue { w, err });
        }
        Ok(SpectralWeightTable { fingerprint, radius, symmetry, classes })
    }

    /// Binary records at `path` and a `.json` sidecar next to it.
    pub fn save(&self, path: &Path) -> Result<()> {
        let err = |source| Error::Cache { path: path.to_path_buf(), source };
        let wrap = |e: Error| match e {
            Error::Io(s) => err(s),
            e => e,
        };
        atomic_write(path, &self.to_bytes()).map_err(wrap)?;
        let side = Sidecar {
            fingerprint: self.fingerprint.clone(),
            radius: self.radius,
            symmetry: self.symmetry,
            classes: self.classes.len(),
            version: VERSION,
            record_file: path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
            weight_target: WEIGHT_TARGET,
        };
        let json = serde_json::to_vec_pretty(&side).map_err(|e| Error::Format(e.to_string()))?;
        atomic_write(&sidecar_path(path), &json).map_err(wrap)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let err = |source| Error::Cache { path: path.to_path_buf(), source };
        let side_path = sidecar_path(path);
        let side: Sidecar = serde_json::from_slice(&fs::read(&side_path).map_err(|s| Error::Cache { path: side_path.clone(), source: s })?)
            .map_err(|e| Error::Format(format!("{}: {e}", side_path.display())))?;
        let t = Self::from_bytes(side.fingerprint, &fs::read(path).map_err(err)?)?;
        if t.radius != side.radius || t.classes.len() != side.classes || t.symmetry != side.symmetry {
            return Err(Error::Format(format!("{}: sidecar disagrees with records", path.display())));
        }
        Ok(t)
    }

    /// CSV with columns m1, m2, rho, theta, w, err over every vector.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["m1", "m2", "rho", "theta", "w", "err"]).map_err(csv_err)?;
        for (m, w) in self.expand() {
            let f = Frequency::lattice(m);
            wtr.write_record([
                m[0].to_string(),
                m[1].to_string(),
                format!("{:e}", f.magnitude()),
                format!("{:e}", f.angle()),
                format!("{:e}", w.w),
                format!("{:e}", w.err),
            ])
            .map_err(csv_err)?;
        }
        let bytes = wtr.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        atomic_write(path, &bytes)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// `HQD_CACHE_DIR`, else `.hqd-cache` in the working directory.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

pub fn cache_file_name(fingerprint: &str, radius: u64) -> String {
    format!("{}_R{radius}.bin", &fingerprint[..fingerprint.len().min(16)])
}

pub fn weight_table(body: &ConvexBody<f64>, radius: u64) -> Result<SpectralWeightTable> {
    SpectralWeightTable::compute(body, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn shells_partition_the_disk() {
        let s = shells(10);
        let total: usize = s.iter().map(Vec::len).sum();
        let direct = (-10i64..=10).flat_map(|a| (-10i64..=10).map(move |b| a * a + b * b)).filter(|&n| n > 0 && n <= 100).count();
        assert_eq!(total, direct);
        assert!(s[0].contains(&[1, 0]) && s[1].contains(&[1, 1]) && s[1].contains(&[2, 0]));
    }

    #[test]
    fn keys_respect_the_group() {
        for sym in [Symmetry::Dihedral, Symmetry::Axis, Symmetry::Diagonal, Symmetry::Central] {
            for m in [[3i64, -5], [0, 7], [-2, -2]] {
                assert_eq!(sym.key(m), sym.key([-m[0], -m[1]]));
            }
        }
        assert_eq!(Symmetry::Axis.key([3, -5]), Symmetry::Axis.key([-3, -5]));
        assert_eq!(Symmetry::Diagonal.key([3, -5]), Symmetry::Diagonal.key([-5, 3]));
        assert_ne!(Symmetry::Central.key([3, -5]), Symmetry::Central.key([3, 5]));
    }

    #[test]
    fn disk_classes_are_distinct_norms() {
        let d = ConvexBody::disk(0.25).unwrap();
        let t = weight_table(&d, 30).unwrap();
        let norms: BTreeSet<i64> = (-30i64..=30).flat_map(|a| (-30i64..=30).map(move |b| a * a + b * b)).filter(|&n| n > 0 && n <= 900).collect();
        assert_eq!(t.class_count(), norms.len());
    }

    #[test]
    fn reload_is_bit_exact_and_symmetric() {
        let b = ConvexBody::monomial_body(1.5).unwrap();
        let t = weight_table(&b, 8).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(cache_file_name(&t.fingerprint, 8));
        t.save(&path).unwrap();
        let u = SpectralWeightTable::load(&path).unwrap();
        assert_eq!(t, u);
        for (m, w) in t.expand() {
            assert_eq!(w.w.to_bits(), t.get([-m[0], -m[1]]).unwrap().w.to_bits());
            assert!(w.w >= 0.0);
        }
        let direct = super::super::power::dilation_avg_power(&b, &Frequency::lattice([-3, 5])).unwrap();
        assert!((t.get([-3, 5]).unwrap().w - direct.w).abs() <= 2e-6 * direct.w);
    }
}
