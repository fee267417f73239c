//! Argument parsing and subcommand dispatch for `hqd`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hqd_core::discrepancy::{d2_direct, d2_spectral_cached, PointSet, Sampler, TailPolicy};
use hqd_core::fourier::{dilation_avg_power, ft_with_estimate, weight_table, Frequency};
use hqd_core::geometry::{chord, estimate_windows, gamma, ChordQuery, ConvexBody};
use hqd_core::Body;
use serde_json::json;

use crate::config::{BodySpec, ExperimentConfig, PointFamily};
use crate::nested::NestedConfig;
use crate::oscillation::OscillationConfig;
use crate::report::{to_json_string, write_csv, write_json};
use crate::scaling::run_scaling;
use crate::{verify, LabError, VerifyReport};

#[derive(Debug, Parser)]
#[command(name = "hqd", version, about = "Quadratic discrepancy laboratory for planar convex bodies")]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build, export and sample bodies.
    #[command(subcommand)]
    Body(BodyCmd),
    /// Chord lengths over a grid.
    #[command(subcommand)]
    Chord(ChordCmd),
    /// Indicator transforms and spectral weights.
    #[command(subcommand)]
    Ft(FtCmd),
    /// Quadratic discrepancy of one point set.
    #[command(subcommand)]
    D2(D2Cmd),
    /// Point-set generation.
    #[command(subcommand)]
    Points(PointsCmd),
    /// N-sweeps with slope fits.
    #[command(subcommand)]
    Scaling(ScalingCmd),
    /// Verification suites; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Demonstrators.
    #[command(subcommand)]
    Demo(DemoCmd),
}

#[derive(Debug, Subcommand)]
pub enum BodyCmd {
    /// Body document from a spec (file or inline JSON).
    Build {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: PathBuf,
        /// Also scan the chord-law window constants.
        #[arg(long)]
        windows: bool,
    },
    /// Summary of a body document: area, diameter, symmetry, defects.
    Export {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boundary samples as CSV.
    Sample {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 1024)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChordCmd {
    /// Chord and γ over θ × λ; θ in radians, comma separated.
    Sweep {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 1e-4)]
        lambda_lo: f64,
        #[arg(long, default_value_t = 1e-1)]
        lambda_hi: f64,
        #[arg(long, default_value_t = 16)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum FtCmd {
    /// 1̂_C(ξ) and w(ξ) at one frequency.
    Eval {
        #[arg(long)]
        body: PathBuf,
        /// ξ₁,ξ₂.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        xi: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectral weight table up to a radius, cached and written as CSV.
    Table {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        radius: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Spectral,
    Direct,
}

#[derive(Debug, Subcommand)]
pub enum D2Cmd {
    Compute {
        #[arg(long)]
        body: PathBuf,
        /// CSV (x,y) or JSON point set.
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Spectral)]
        method: MethodArg,
        #[arg(long)]
        radius: Option<u64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fail instead of warning when the tail bound dominates.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PointsCmd {
    /// Point set of a family spec (file or inline JSON).
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV, or JSON with provenance by extension.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScalingCmd {
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    L1,
    Aux,
    Tec1,
    Cm,
    Uselem,
    Domination,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Body documents checked by `all`; defaults to ./corpus when present.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DemoCmd {
    Nested {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    Oscillation {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn inline_or_file<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, LabError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| LabError::Usage(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| LabError::Usage(format!("{arg}: {e}")))
}

fn load_body(path: &Path) -> Result<Body, LabError> {
    ConvexBody::load_json(path).map_err(|e| LabError::file(path, e))
}

/// JSON to a file, or to stdout.
fn emit<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<(), LabError> {
    match out {
        Some(p) => write_json(p, value)?,
        None => println!("{}", to_json_string(value)),
    }
    Ok(())
}

fn emit_verify(report: &VerifyReport, out: Option<&Path>) -> Result<i32, LabError> {
    for c in &report.checks {
        eprintln!("{} [{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.name, c.detail);
    }
    emit(out, report)?;
    Ok(if report.passed { 0 } else { 1 })
}

/// Exit status of a parsed invocation.
pub fn dispatch(cli: Cli) -> Result<i32, LabError> {
    match cli.command {
        Command::Body(BodyCmd::Build { spec, out, windows }) => {
            let spec: BodySpec = inline_or_file(&spec)?;
            let mut body = spec.build()?;
            if windows {
                estimate_windows(&mut body)?;
            }
            body.save_json(&out)?;
        }
        Command::Body(BodyCmd::Export { body, out }) => {
            let b = load_body(&body)?;
            let (turning, gap) = b.closure_defects();
            let summary = json!({
                "document": b.to_document(),
                "area": b.area,
                "diameter": b.diameter,
                "center": b.center,
                "central": b.central,
                "axis": b.axis,
                "diagonal": b.diagonal,
                "total_turning": turning,
                "closure_gap": gap,
                "junction_defects": b.junction_defects(),
            });
            emit(out.as_deref(), &summary)?;
        }
        Command::Body(BodyCmd::Sample { body, count, out }) => {
            if count < 3 {
                return Err(LabError::Usage("--count must be at least 3".into()));
            }
            load_body(&body)?.write_boundary_csv(&out, count)?;
        }
        Command::Chord(ChordCmd::Sweep { body, theta, lambda_lo, lambda_hi, count, out }) => {
            if !(lambda_lo > 0.0 && lambda_lo < lambda_hi) || count < 2 {
                return Err(LabError::Usage("--lambda-lo/--lambda-hi need 0 < lo < hi and --count ≥ 2".into()));
            }
            let b = load_body(&body)?;
            let mut rows = Vec::new();
            for &t in &theta {
                for l in hqd_core::fourier::log_grid(lambda_lo, lambda_hi, count) {
                    let q = ChordQuery::new(t, l);
                    rows.push(vec![t.to_string(), l.to_string(), chord(&b, &q)?.to_string(), gamma(&b, &q)?.to_string()]);
                }
            }
            write_csv(&out, &["theta", "lambda", "chord", "gamma"], &rows)?;
        }
        Command::Ft(FtCmd::Eval { body, xi, out }) => {
            if xi.len() != 2 {
                return Err(LabError::Usage(format!("--xi takes two components, got {}", xi.len())));
            }
            let b = load_body(&body)?;
            let f = Frequency::continuous([xi[0], xi[1]]);
            let (v, err) = ft_with_estimate(&b, &f)?;
            let w = dilation_avg_power(&b, &f)?;
            emit(out.as_deref(), &json!({ "xi": xi, "re": v.re, "im": v.im, "error": err, "w": w.w, "w_error": w.err }))?;
        }
        Command::Ft(FtCmd::Table { body, radius, out }) => {
            weight_table(&load_body(&body)?, radius)?.write_csv(&out)?;
        }
        Command::D2(D2Cmd::Compute { body, points, method, radius, samples, seed, strict, out }) => {
            let b = load_body(&body)?;
            let ps = PointSet::load(&points).map_err(|e| LabError::file(&points, e))?;
            let policy = if strict { TailPolicy::Strict } else { TailPolicy::Warn };
            let est = match method {
                MethodArg::Spectral => {
                    let r = radius.ok_or_else(|| LabError::Usage("--radius is required with --method spectral".into()))?;
                    d2_spectral_cached(&b, &ps, r, None, policy)?
                }
                MethodArg::Direct => d2_direct(&b, &ps, &Sampler::new(samples, seed))?,
            };
            emit(out.as_deref(), &est)?;
        }
        Command::Points(PointsCmd::Generate { family, n, seed, out }) => {
            let fam: PointFamily = inline_or_file(&family)?;
            let g = fam.generate(n, seed)?;
            if out.extension().is_some_and(|e| e == "json") {
                g.points.save_json(&out)?;
            } else {
                g.points.save_csv(&out)?;
            }
        }
        Command::Scaling(ScalingCmd::Run { config, out }) => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if out.is_some() {
                cfg.output = out;
            }
            let dir = cfg.output.clone().ok_or_else(|| LabError::Usage("no output directory: set `output` or pass --out".into()))?;
            let report = run_scaling(&cfg)?;
            report.write(&dir)?;
            eprintln!("slope {:?}, passed {:?}, partial {}", report.fit.as_ref().map(|f| f.slope), report.passed, report.partial);
            return Ok(if report.passed == Some(false) { 1 } else { 0 });
        }
        Command::Verify(args) => {
            let corpus = args.corpus.or_else(|| Some(PathBuf::from("corpus")).filter(|p| p.is_dir()));
            let report = match args.suite {
                Suite::All => verify::all(corpus.as_deref())?,
                Suite::L1 => VerifyReport::new(verify::l1()?),
                Suite::Aux => VerifyReport::new(verify::aux()?),
                Suite::Tec1 => VerifyReport::new(verify::tec1()?),
                Suite::Cm => VerifyReport::new(verify::cm(100)?),
                Suite::Uselem => VerifyReport::new(verify::uselem(10, 16, 48)?),
                Suite::Domination => VerifyReport::new(verify::domination(10_000)?),
            };
            return emit_verify(&report, args.out.as_deref());
        }
        Command::Demo(DemoCmd::Nested { config, out }) => {
            let cfg = match config {
                Some(p) => NestedConfig::load(&p)?,
                None => NestedConfig::default_demo(),
            };
            let report = crate::run_nested_demo(&cfg)?;
            write_json(&out.join("report.json"), &report)?;
            return Ok(if report.passed { 0 } else { 1 });
        }
        Command::Demo(DemoCmd::Oscillation { config, out }) => {
            let cfg = OscillationConfig::load(&config)?;
            let report = crate::run_oscillation_demo(&cfg)?;
            report.write(&out)?;
            for d in &report.diagnostics {
                eprintln!("{d}");
            }
            // Window-not-found is a reported outcome, not a failure.
            return Ok(0);
        }
    }
    Ok(0)
}

/// Parses the process arguments, runs, and maps failures to exit codes.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads;
    let work = move || match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hqd: {e}");
            e.exit_code()
        }
    };
    match threads {
        Some(0) => {
            eprintln!("hqd: --threads must be positive");
            2
        }
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                eprintln!("hqd: thread pool: {e}");
                1
            }
        },
        None => work(),
    }
}
