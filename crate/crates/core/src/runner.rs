//! Batch front end: one command per run, a JSON (or CSV) report, and an exit
//! status reflecting whether every contract checked in the run held.

use crate::curvature::{
    certify_ii, certify_iii_positive, certify_prop35, estimate_eps0, scan_region_f, Certificate,
};
use crate::jordan::{jordan_decomposition, symmetry_report};
use crate::pluecker::{orientation_flip, w_inner};
use crate::sampling::chunk_rng;
use crate::submanifold::{
    bridge_convergence, conelike_check, gauss_w, object, patch_at, slope_delta, TestObject,
};
use crate::subspace::Subspace;
use crate::{tol, Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Angles,
    Wfun,
    #[serde(rename = "certify-II")]
    CertifyII,
    #[serde(rename = "certify-III")]
    CertifyIII,
    ScanF,
    EstimateEps0,
    CertifyProp35,
    CheckImmersion,
    BridgeCheck,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Angles,
        Command::Wfun,
        Command::CertifyII,
        Command::CertifyIII,
        Command::ScanF,
        Command::EstimateEps0,
        Command::CertifyProp35,
        Command::CheckImmersion,
        Command::BridgeCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Angles => "angles",
            Command::Wfun => "wfun",
            Command::CertifyII => "certify-II",
            Command::CertifyIII => "certify-III",
            Command::ScanF => "scan-f",
            Command::EstimateEps0 => "estimate-eps0",
            Command::CertifyProp35 => "certify-prop35",
            Command::CheckImmersion => "check-immersion",
            Command::BridgeCheck => "bridge-check",
        }
    }

    fn default_samples(self) -> u64 {
        match self {
            Command::Angles | Command::Wfun => 100,
            Command::CertifyII => 10_000,
            Command::CertifyIII => 100_000,
            Command::EstimateEps0 => 10_000,
            Command::CertifyProp35 => 10_000,
            Command::CheckImmersion => 20,
            Command::BridgeCheck => 5,
            Command::ScanF => 0,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let known: Vec<&str> = Command::ALL.iter().map(|c| c.name()).collect();
                Error::PreconditionViolated(format!("unknown command '{s}' (known: {})", known.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::PreconditionViolated(format!("unknown format '{s}'"))),
        }
    }
}

/// Where `Q₀` comes from: the coordinate plane of the last `m` axes (the
/// object's own `Q₀` for immersions) or the inline file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Q0Source {
    #[default]
    Coordinate,
    Inline,
}

impl FromStr for Q0Source {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "coordinate" => Ok(Q0Source::Coordinate),
            "inline" => Ok(Q0Source::Inline),
            _ => Err(Error::PreconditionViolated(format!("unknown q0 source '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    /// Grid density for `scan-f`, `certify-II` and `estimate-eps0`.
    pub density: usize,
    pub samples: Option<u64>,
    pub seed: u64,
    /// Command tolerance: clustering for `angles`/`wfun`, the minimality bound
    /// for `check-immersion`, the agreement bound for `bridge-check`.
    pub tol: Option<f64>,
    pub fd_step: Option<f64>,
    pub object: Option<String>,
    pub q0: Q0Source,
    pub inline: Option<PathBuf>,
    pub rank: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            density: 50,
            samples: None,
            seed: 0,
            tol: None,
            fd_step: None,
            object: None,
            q0: Q0Source::Coordinate,
            inline: None,
            rank: 3,
            out: None,
            format: Format::Json,
        }
    }

    pub fn samples(&self) -> u64 {
        self.samples.unwrap_or(self.command.default_samples())
    }

    /// Checks everything that can be checked before running.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::PreconditionViolated(msg));
        if self.density < 10 {
            return bad(format!("density {} must be ≥ 10", self.density));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("tolerance {t} must be positive"));
            }
        }
        if let Some(h) = self.fd_step {
            if !(h > 0.0 && h.is_finite()) {
                return bad(format!("fd-step {h} must be positive"));
            }
        }
        if self.samples == Some(0) && self.command != Command::ScanF {
            return bad("samples must be ≥ 1".into());
        }
        if self.q0 == Q0Source::Inline && self.inline.is_none() {
            return bad("--q0 inline needs --inline <file>".into());
        }
        if self.command == Command::EstimateEps0 && !(1..=6).contains(&self.rank) {
            return bad(format!("rank {} outside 1..=6", self.rank));
        }
        if let Some(name) = &self.object {
            object(name)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub records: Vec<Value>,
    pub extremal: Value,
    pub pass: bool,
    pub timestamp: String,
    pub versions: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per record; nested values are written as JSON text.
    pub fn to_csv(&self) -> Result<String> {
        let mut keys: Vec<String> = Vec::new();
        for r in &self.records {
            if let Value::Object(map) = r {
                for k in map.keys() {
                    if !keys.contains(k) {
                        keys.push(k.clone());
                    }
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Shape(format!("csv: {e}"));
        w.write_record(&keys).map_err(io)?;
        for r in &self.records {
            let row: Vec<String> = keys
                .iter()
                .map(|k| match r.get(k) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                })
                .collect();
            w.write_record(&row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Shape(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn render(&self) -> Result<String> {
        match self.config.format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Frames from text: each non-blank row is one vector of whitespace-separated
/// decimals, and blank lines separate frames. `#` starts a comment.
pub fn parse_frames(text: &str) -> Result<Vec<DMatrix<f64>>> {
    let mut frames = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let flush = |rows: &mut Vec<Vec<f64>>, frames: &mut Vec<DMatrix<f64>>| -> Result<()> {
        if rows.is_empty() {
            return Ok(());
        }
        let len = rows[0].len();
        if rows.iter().any(|r| r.len() != len) {
            return Err(Error::Shape("frame rows differ in length".into()));
        }
        let cols: Vec<DVector<f64>> = rows.drain(..).map(DVector::from_vec).collect();
        frames.push(DMatrix::from_columns(&cols));
        Ok(())
    };
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            flush(&mut rows, &mut frames)?;
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Shape(format!("line {}: '{t}' is not a number", lineno + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    flush(&mut rows, &mut frames)?;
    Ok(frames)
}

fn read_frames(path: &Path) -> Result<Vec<Subspace>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::PreconditionViolated(format!("cannot read {}: {e}", path.display())))?;
    parse_frames(&text)?
        .iter()
        .map(Subspace::from_columns)
        .collect()
}

fn timestamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("{secs}")
}

fn versions() -> Value {
    let v = env!("CARGO_PKG_VERSION");
    json!({
        "bernstein-lab": v,
        "subspace": v,
        "jordan": v,
        "pluecker": v,
        "curvature": v,
        "submanifold": v,
        "runner": v,
    })
}

/// Runs one command. Configuration problems come back as `Err`; failures of
/// the checked contracts are reported through `pass` and the records.
pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let (records, extremal, pass) = match config.command {
        Command::Angles => run_pairs(config, false)?,
        Command::Wfun => run_pairs(config, true)?,
        Command::CertifyII => certificate(certify_ii(config.density, config.samples(), config.seed)?),
        Command::CertifyIII => certificate(certify_iii_positive(config.samples(), config.seed)?),
        Command::CertifyProp35 => certificate(certify_prop35(config.samples(), config.seed)?),
        Command::ScanF => {
            let s = scan_region_f(config.density)?;
            let pass = s.max_found <= 5.0 / 6.0 + 1e-6;
            let rec = serde_json::to_value(s).expect("serializable");
            (vec![rec.clone()], json!({"max_found": s.max_found, "argmax": rec["argmax"]}), pass)
        }
        Command::EstimateEps0 => {
            let e = estimate_eps0(config.rank, config.density, config.samples(), config.seed)?;
            let pass = e.pass();
            let ext = json!({"eps0": e.value, "lambdas": e.argmin_lambdas, "alpha": e.argmin_alpha});
            (vec![serde_json::to_value(&e).expect("serializable")], ext, pass)
        }
        Command::CheckImmersion => run_check_immersion(config)?,
        Command::BridgeCheck => run_bridge(config)?,
    };
    let mut effective = config.clone();
    effective.samples = Some(config.samples());
    Ok(Report {
        command: config.command.name().to_string(),
        config: effective,
        records,
        extremal,
        pass,
        timestamp: timestamp(),
        versions: versions(),
    })
}

fn certificate(c: Certificate) -> (Vec<Value>, Value, bool) {
    let pass = c.pass;
    let ext = json!({"extremal_value": c.extremal_value});
    (vec![serde_json::to_value(c).expect("serializable")], ext, pass)
}

/// Dimension pairs `(m, n)` cycled through for seeded random pairs.
const PAIR_DIMS: [(usize, usize); 5] = [(1, 2), (2, 2), (2, 3), (3, 4), (4, 5)];

fn pairs(config: &RunConfig) -> Result<Vec<(Subspace, Subspace)>> {
    if let Some(path) = &config.inline {
        let frames = read_frames(path)?;
        let p = frames
            .first()
            .cloned()
            .ok_or_else(|| Error::PreconditionViolated("inline file holds no frame".into()))?;
        let q0 = match config.q0 {
            Q0Source::Inline => frames.get(1).cloned().ok_or_else(|| {
                Error::PreconditionViolated("--q0 inline needs a second frame in the inline file".into())
            })?,
            Q0Source::Coordinate => {
                let (amb, m) = (p.ambient_dim(), p.dim());
                Subspace::coordinate(amb, amb - m..amb)?
            }
        };
        return Ok(vec![(p, q0)]);
    }
    let mut rng = chunk_rng(config.seed, 0);
    Ok((0..config.samples())
        .map(|k| {
            let (m, n) = PAIR_DIMS[k as usize % PAIR_DIMS.len()];
            (Subspace::random(&mut rng, m + n, m), Subspace::random(&mut rng, m + n, m))
        })
        .collect())
}

fn run_pairs(config: &RunConfig, wfun: bool) -> Result<(Vec<Value>, Value, bool)> {
    let cluster_tol = config.tol.unwrap_or(tol::CLUSTER);
    let mut records = Vec::new();
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for (k, (p, q0)) in pairs(config)?.iter().enumerate() {
        let rec = if wfun {
            let wv = w_inner(p, q0)?;
            let flip = orientation_flip(p, q0)?;
            let defect = (wv.w.abs() - wv.angle_product).abs();
            let flip_defect = (wv.w + flip).abs();
            let ok = defect <= 1e-10 && flip_defect <= 1e-12;
            worst = worst.max(defect);
            pass &= ok;
            let v = (wv.w > tol::W_POSITIVE).then(|| 1.0 / wv.w);
            json!({"index": k, "m": p.dim(), "ambient": p.ambient_dim(), "w": wv.w, "v": v,
                   "angle_product": wv.angle_product, "flipped": flip, "pass": ok})
        } else {
            let dec = jordan_decomposition(p, q0, cluster_tol)?;
            let sym = symmetry_report(p, q0, cluster_tol)?;
            let total: usize = dec.clusters().iter().map(|c| c.multiplicity).sum();
            let ok = total == p.dim() && sym.holds(1e-9);
            pass &= ok;
            worst = worst.max(dec.angles().first().copied().unwrap_or(0.0));
            json!({"index": k, "m": p.dim(), "ambient": p.ambient_dim(),
                   "clusters": dec.classes(), "r": sym.r, "symmetry_holds": sym.holds(1e-9), "pass": ok})
        };
        records.push(rec);
    }
    let extremal = if wfun {
        json!({"max_angle_product_defect": worst})
    } else {
        json!({"max_angle": worst})
    };
    Ok((records, extremal, pass))
}

fn object_and_q0(config: &RunConfig, default: &str) -> Result<(TestObject, Subspace)> {
    let obj = object(config.object.as_deref().unwrap_or(default))?;
    let q0 = match config.q0 {
        Q0Source::Coordinate => obj.q0.clone(),
        Q0Source::Inline => {
            let path = config.inline.as_ref().expect("validated");
            read_frames(path)?
                .into_iter()
                .next()
                .ok_or_else(|| Error::PreconditionViolated("inline file holds no frame".into()))?
        }
    };
    Ok((obj, q0))
}

fn run_check_immersion(config: &RunConfig) -> Result<(Vec<Value>, Value, bool)> {
    let (obj, q0) = object_and_q0(config, "lawson-osserman")?;
    let step = config.fd_step.unwrap_or(obj.immersion.recommended_step());
    let h_bound = config.tol.unwrap_or(1e-5);
    let im = obj.immersion.as_ref();
    let mut rng = chunk_rng(config.seed, 0);
    let points: Vec<DVector<f64>> = (0..config.samples()).map(|_| obj.sample_point(&mut rng)).collect();
    let mut records = Vec::new();
    let mut pass = true;
    let mut worst_h: f64 = 0.0;
    let mut worst_w: f64 = 0.0;
    for x in &points {
        let rec = match patch_at(im, x, step) {
            Ok(patch) => {
                let w = gauss_w(&patch, &q0)?;
                let h = patch.mean_curvature_norm();
                let mut ok = true;
                if obj.expected.minimal {
                    ok &= h < h_bound;
                    worst_h = worst_h.max(h);
                }
                if let Some(hn) = obj.expected.mean_curvature_norm.filter(|_| !obj.expected.minimal) {
                    ok &= (h - hn).abs() < h_bound.max(patch.error_budget);
                    worst_h = worst_h.max((h - hn).abs());
                }
                if let (Some(we), Q0Source::Coordinate) = (obj.expected.w, config.q0) {
                    ok &= (w - we).abs() <= 1e-6;
                    worst_w = worst_w.max((w - we).abs());
                }
                let sd = match &obj.graph {
                    Some(g) => Some(slope_delta(g, x, step)?),
                    None => None,
                };
                if let (Some(sd), Some(se)) = (sd, obj.expected.slope_delta) {
                    ok &= (sd - se).abs() <= 1e-5;
                }
                pass &= ok;
                json!({"point": x.as_slice(), "w": w, "v": (w > tol::W_POSITIVE).then(|| 1.0 / w),
                       "mean_curvature_norm": h, "slope_delta": sd,
                       "error_budget": patch.error_budget, "pass": ok})
            }
            Err(e) => {
                pass = false;
                json!({"point": x.as_slice(), "error": e.to_string(), "pass": false})
            }
        };
        records.push(rec);
    }
    let mut extremal = json!({"max_mean_curvature_residual": worst_h, "max_w_deviation": worst_w});
    if obj.expected.cone {
        let scales = [0.5, 1.0, 2.0, 4.0];
        match conelike_check(im, &q0, &points, &scales) {
            Ok(c) => {
                let ok = c.variation <= 1e-9;
                pass &= ok;
                extremal["conelike_variation"] = json!(c.variation);
                records.push(json!({"conelike_variation": c.variation, "scales": scales, "pass": ok}));
            }
            Err(e) => {
                pass = false;
                records.push(json!({"conelike_error": e.to_string(), "pass": false}));
            }
        }
    }
    Ok((records, extremal, pass))
}

fn run_bridge(config: &RunConfig) -> Result<(Vec<Value>, Value, bool)> {
    let (obj, q0) = object_and_q0(config, "clifford-cone")?;
    let step = config.fd_step.unwrap_or(1e-3);
    let bound = config.tol.unwrap_or(1e-3);
    let mut rng = chunk_rng(config.seed, 0);
    let mut records = Vec::new();
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for _ in 0..config.samples() {
        let x = obj.sample_point(&mut rng);
        let rec = match bridge_convergence(obj.immersion.as_ref(), &q0, &x, step) {
            Ok(c) => {
                let ok = c.coarse.error <= bound && c.converges;
                pass &= ok;
                worst = worst.max(c.coarse.error);
                let mut v = serde_json::to_value(&c).expect("serializable");
                v["point"] = json!(x.as_slice());
                v["pass"] = json!(ok);
                v
            }
            Err(e) => {
                pass = false;
                json!({"point": x.as_slice(), "error": e.to_string(), "pass": false})
            }
        };
        records.push(rec);
    }
    Ok((records, json!({"max_error": worst}), pass))
}
