//! Monte Carlo orchestration across the sampling routes, persistence of
//! estimates with their reproduction manifests, and the comparison statistics.
//!
//! Reproducibility model: sample i of any run always derives its randomness
//! from (master_seed, stream i), and results merge by sample index, so every
//! persisted number is a pure function of configuration and seed regardless
//! of how many workers ran. `EDGEKIT_THREADS` caps the worker pool without
//! affecting output.

pub mod stats;

use crate::airyop::{sao_eigs, AiryOpError};
use crate::ensembles::{edge_sample, EnsembleError, EnsembleSpec, HermiteSpec, LaguerreSpec};
use crate::painleve::{tw_reference, PainleveConfig, PainleveError, TwBeta};
use crate::randkit::RngStream;
use crate::riccati::{self, RiccatiConfig, RiccatiError};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("sample arrays must be nonempty")]
    EmptySamples,
    #[error("inputs must be finite (and offsets positive, non-degenerate)")]
    NonFinite,
    #[error("probability level must lie in (0, 1), got {0}")]
    BadLevel(f64),
    #[error("invalid counts: {successes} successes out of {trials} trials")]
    BadCounts { successes: usize, trials: usize },
    #[error("need at least 3 points for a slope fit, got {found}")]
    TooFewPoints { found: usize },
    #[error("lambda grid must be nonempty, finite, and strictly increasing")]
    BadGrid,
    #[error("samples must be >= 1 for a Monte Carlo route")]
    NoSamples,
    #[error("edge-sample requests need 1 <= k and every row of equal length")]
    BadRows,
    #[error("reference curves exist only for beta in {{1, 2, 4}}, got {0}")]
    BadPainleveBeta(f64),
    #[error("the painleve route is deterministic; it has no edge-sample draws")]
    NoSamplingRoute,
    #[error("not a valid method name: {0:?}")]
    BadMethod(String),
    #[error("estimate invariant violated: {0}")]
    BadEstimate(&'static str),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    AiryOp(#[from] AiryOpError),
    #[error(transparent)]
    Riccati(#[from] RiccatiError),
    #[error(transparent)]
    Painleve(#[from] PainleveError),
}

/// Sampling (or evaluation) route that produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hermite,
    Laguerre,
    Sao,
    Riccati,
    Painleve,
}

impl Method {
    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            Method::Hermite => "hermite",
            Method::Laguerre => "laguerre",
            Method::Sao => "sao",
            Method::Riccati => "riccati",
            Method::Painleve => "painleve",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hermite" => Ok(Method::Hermite),
            "laguerre" => Ok(Method::Laguerre),
            "sao" => Ok(Method::Sao),
            "riccati" => Ok(Method::Riccati),
            "painleve" => Ok(Method::Painleve),
            other => Err(HarnessError::BadMethod(other.to_string())),
        }
    }
}

/// Everything needed to regenerate an output bit for bit (plus the wall
/// clock, which is informational only and the one field that varies between
/// reruns). Persisted as a JSON sidecar next to each CSV.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    master_seed: u64,
    generator: String,
    params: serde_json::Value,
    wall_clock_secs: f64,
    version: String,
}

impl RunManifest {
    #[must_use]
    pub fn new(master_seed: u64, params: serde_json::Value, wall_clock_secs: f64) -> Self {
        RunManifest {
            master_seed,
            generator: crate::randkit::GENERATOR.to_string(),
            params,
            wall_clock_secs,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    #[must_use]
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    #[must_use]
    pub fn params(&self) -> &serde_json::Value {
        &self.params
    }

    #[must_use]
    pub fn wall_clock_secs(&self) -> f64 {
        self.wall_clock_secs
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn check_grid(grid: &[f64]) -> Result<(), HarnessError> {
    if grid.is_empty()
        || grid.iter().any(|l| !l.is_finite())
        || grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(HarnessError::BadGrid);
    }
    Ok(())
}

/// An estimated survival function lambda -> P(lowest level > lambda) on an
/// ascending grid, with per-point binomial standard errors. Estimates built
/// from shared draws are exactly nonincreasing, and the constructor refuses
/// anything else. `samples == 0` marks a deterministic reference curve.
#[derive(Debug, Clone)]
pub struct CdfEstimate {
    lambda_grid: Vec<f64>,
    survival: Vec<f64>,
    stderr: Vec<f64>,
    samples: usize,
    undecided: usize,
    method: Method,
    beta: f64,
    manifest: RunManifest,
}

impl CdfEstimate {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda_grid: Vec<f64>,
        survival: Vec<f64>,
        stderr: Vec<f64>,
        samples: usize,
        undecided: usize,
        method: Method,
        beta: f64,
        manifest: RunManifest,
    ) -> Result<Self, HarnessError> {
        check_grid(&lambda_grid)?;
        if survival.len() != lambda_grid.len() || stderr.len() != lambda_grid.len() {
            return Err(HarnessError::BadEstimate("array lengths differ"));
        }
        if survival.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(HarnessError::BadEstimate("survival outside [0, 1]"));
        }
        if survival.windows(2).any(|w| w[1] > w[0]) {
            return Err(HarnessError::BadEstimate("survival increases along the grid"));
        }
        if stderr.iter().any(|&s| !s.is_finite() || s < 0.0) {
            return Err(HarnessError::BadEstimate("invalid standard error"));
        }
        if undecided > samples {
            return Err(HarnessError::BadEstimate("undecided exceeds samples"));
        }
        Ok(CdfEstimate { lambda_grid, survival, stderr, samples, undecided, method, beta, manifest })
    }

    #[must_use]
    pub fn lambda_grid(&self) -> &[f64] {
        &self.lambda_grid
    }

    #[must_use]
    pub fn survival(&self) -> &[f64] {
        &self.survival
    }

    #[must_use]
    pub fn stderr(&self) -> &[f64] {
        &self.stderr
    }

    #[must_use]
    pub fn samples(&self) -> usize {
        self.samples
    }

    #[must_use]
    pub fn undecided(&self) -> usize {
        self.undecided
    }

    #[must_use]
    pub fn method(&self) -> Method {
        self.method
    }

    #[must_use]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[must_use]
    pub fn manifest(&self) -> &RunManifest {
        &self.manifest
    }

    /// More than 1% of paths undecided: treat the numbers with suspicion.
    #[must_use]
    pub fn flagged(&self) -> bool {
        self.undecided as f64 > 0.01 * self.samples as f64
    }
}

/// Worker pool shared by every estimator, sized from `EDGEKIT_THREADS`
/// (unset, 0, or unparseable all mean "one worker per core").
pub fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var("EDGEKIT_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("worker pool construction")
    })
}

/// Route-specific parameters for an experiment.
#[derive(Debug, Clone)]
pub enum RouteParams {
    Hermite { n: usize },
    Laguerre { n: usize, kappa: f64 },
    Sao { h: f64, x_max: f64 },
    Riccati { config: RiccatiConfig },
    Painleve,
}

impl RouteParams {
    #[must_use]
    pub fn method(&self) -> Method {
        match self {
            RouteParams::Hermite { .. } => Method::Hermite,
            RouteParams::Laguerre { .. } => Method::Laguerre,
            RouteParams::Sao { .. } => Method::Sao,
            RouteParams::Riccati { .. } => Method::Riccati,
            RouteParams::Painleve => Method::Painleve,
        }
    }

    fn params_json(&self, beta: f64, k: usize, samples: usize) -> serde_json::Value {
        let route = match self {
            RouteParams::Hermite { n } => serde_json::json!({"n": n}),
            RouteParams::Laguerre { n, kappa } => serde_json::json!({"n": n, "kappa": kappa}),
            RouteParams::Sao { h, x_max } => serde_json::json!({"h": h, "x_max": x_max}),
            RouteParams::Riccati { config } => serde_json::json!({
                "config": config,
                "bracket": riccati::DEFAULT_BRACKET,
                "tol": riccati::DEFAULT_TOL,
            }),
            RouteParams::Painleve => {
                let c = PainleveConfig::default();
                serde_json::json!({"s_max": c.s_max, "s_min": c.s_min, "step": c.step})
            }
        };
        serde_json::json!({
            "method": self.method().name(),
            "beta": beta,
            "k": k,
            "samples": samples,
            "route": route,
        })
    }
}

/// Draw `samples` independent joint realizations of the k lowest edge
/// levels through the given route, one stream per sample index. Rows are
/// ascending and the outer order is by sample index.
pub fn draw_edge_values(
    route: &RouteParams,
    beta: f64,
    k: usize,
    samples: usize,
    master_seed: u64,
) -> Result<Vec<Vec<f64>>, HarnessError> {
    if samples == 0 {
        return Err(HarnessError::NoSamples);
    }
    if k == 0 {
        return Err(HarnessError::BadRows);
    }
    let draw_one = |i: u64| -> Result<Vec<f64>, HarnessError> {
        let mut stream = RngStream::new(master_seed, i);
        match route {
            RouteParams::Hermite { n } => {
                let spec = EnsembleSpec::Hermite(HermiteSpec::new(*n, beta)?);
                Ok(edge_sample(&spec, k, &mut stream)?.values().to_vec())
            }
            RouteParams::Laguerre { n, kappa } => {
                let spec = EnsembleSpec::Laguerre(LaguerreSpec::new(*n, *kappa, beta)?);
                Ok(edge_sample(&spec, k, &mut stream)?.values().to_vec())
            }
            RouteParams::Sao { h, x_max } => Ok(sao_eigs(beta, *h, *x_max, k, &mut stream)?),
            RouteParams::Riccati { config } => Ok(riccati::sample_lambda_k(
                beta,
                k - 1,
                config,
                &mut stream,
                riccati::DEFAULT_BRACKET,
                riccati::DEFAULT_TOL,
            )?),
            RouteParams::Painleve => Err(HarnessError::NoSamplingRoute),
        }
    };
    pool().install(|| (0..samples as u64).into_par_iter().map(draw_one).collect())
}

/// One full estimation run over a lambda grid.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub route: RouteParams,
    pub beta: f64,
    pub lambda_grid: Vec<f64>,
    pub samples: usize,
    pub master_seed: u64,
    /// When set, the estimate is persisted here as CSV plus a
    /// `<name>.manifest.json` sidecar.
    pub out: Option<PathBuf>,
}

/// Estimate the survival function through the configured route and persist
/// it. Monte Carlo routes share all draws across the grid, so the resulting
/// curve is exactly nonincreasing; the painleve route evaluates the
/// deterministic reference instead.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<CdfEstimate, HarnessError> {
    check_grid(&cfg.lambda_grid)?;
    let start = std::time::Instant::now();
    let est = match &cfg.route {
        RouteParams::Riccati { config } => riccati::estimate_cdf(
            cfg.beta,
            &cfg.lambda_grid,
            cfg.samples,
            config,
            cfg.master_seed,
        )?,
        RouteParams::Painleve => {
            let tw = TwBeta::from_value(cfg.beta)
                .ok_or(HarnessError::BadPainleveBeta(cfg.beta))?;
            let sol = PainleveConfig::default().solve()?;
            let survival = cfg
                .lambda_grid
                .iter()
                .map(|&l| tw_reference(tw, -l, &sol))
                .collect::<Result<Vec<f64>, PainleveError>>()?;
            let stderr = vec![0.0; survival.len()];
            let manifest = RunManifest::new(
                cfg.master_seed,
                cfg.route.params_json(cfg.beta, 1, 0),
                start.elapsed().as_secs_f64(),
            );
            CdfEstimate::new(
                cfg.lambda_grid.clone(),
                survival,
                stderr,
                0,
                0,
                Method::Painleve,
                cfg.beta,
                manifest,
            )?
        }
        route => {
            let rows = draw_edge_values(route, cfg.beta, 1, cfg.samples, cfg.master_seed)?;
            let n = rows.len() as f64;
            let mut survival = Vec::with_capacity(cfg.lambda_grid.len());
            let mut stderr = Vec::with_capacity(cfg.lambda_grid.len());
            for &l in &cfg.lambda_grid {
                let hits = rows.iter().filter(|r| r[0] > l).count();
                let p = hits as f64 / n;
                survival.push(p);
                stderr.push((p * (1.0 - p) / n).sqrt());
            }
            let manifest = RunManifest::new(
                cfg.master_seed,
                cfg.route.params_json(cfg.beta, 1, cfg.samples),
                start.elapsed().as_secs_f64(),
            );
            CdfEstimate::new(
                cfg.lambda_grid.clone(),
                survival,
                stderr,
                cfg.samples,
                0,
                route.method(),
                cfg.beta,
                manifest,
            )?
        }
    };
    if let Some(out) = &cfg.out {
        write_cdf(&est, out)?;
    }
    Ok(est)
}

// ---- persistence ----------------------------------------------------------

/// Sidecar path for a CSV output: `<path>.manifest.json`.
#[must_use]
pub fn manifest_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_os_string();
    os.push(".manifest.json");
    PathBuf::from(os)
}

/// Write through a temp file in the same directory plus rename, so readers
/// never observe a half-written file and failed runs leave no partial output.
pub fn atomic_write(path: &Path, contents: &str) -> Result<(), HarnessError> {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    let stamp = COUNTER.fetch_add(1, Ordering::Relaxed);
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(format!(".tmp-{}-{stamp}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents)?;
    if let Err(e) = std::fs::rename(&tmp, path) {
        let _ = std::fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}

/// CSV rendering of an estimate: `lambda,survival,stderr` header then one
/// row per grid point. f64 Display is shortest-roundtrip, so rereading
/// reproduces the exact bits and reruns are byte-identical.
#[must_use]
pub fn cdf_csv(est: &CdfEstimate) -> String {
    let mut out = String::from("lambda,survival,stderr\n");
    for i in 0..est.lambda_grid.len() {
        out.push_str(&format!(
            "{},{},{}\n",
            est.lambda_grid[i], est.survival[i], est.stderr[i]
        ));
    }
    out
}

/// Persist an estimate as CSV with its manifest sidecar.
pub fn write_cdf(est: &CdfEstimate, path: &Path) -> Result<(), HarnessError> {
    atomic_write(path, &cdf_csv(est))?;
    let mut manifest = est.manifest().to_json()?;
    manifest.push('\n');
    atomic_write(&manifest_path(path), &manifest)
}

/// The numeric content of a persisted CDF run.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    pub lambda: Vec<f64>,
    pub survival: Vec<f64>,
    pub stderr: Vec<f64>,
}

pub fn read_cdf_table(path: &Path) -> Result<CdfTable, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "lambda,survival,stderr")) => {}
        _ => {
            return Err(HarnessError::Parse {
                line: 1,
                msg: "expected header lambda,survival,stderr".to_string(),
            })
        }
    }
    let mut table = CdfTable { lambda: vec![], survival: vec![], stderr: vec![] };
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let cols = parse_row(line, idx + 1, 3)?;
        table.lambda.push(cols[0]);
        table.survival.push(cols[1]);
        table.stderr.push(cols[2]);
    }
    if table.lambda.is_empty() {
        return Err(HarnessError::Parse { line: 2, msg: "no data rows".to_string() });
    }
    Ok(table)
}

fn parse_row(line: &str, lineno: usize, want: usize) -> Result<Vec<f64>, HarnessError> {
    let cols: Vec<&str> = line.split(',').collect();
    if cols.len() != want {
        return Err(HarnessError::Parse {
            line: lineno,
            msg: format!("expected {want} columns, found {}", cols.len()),
        });
    }
    cols.iter()
        .map(|c| {
            c.trim().parse::<f64>().map_err(|e| HarnessError::Parse {
                line: lineno,
                msg: format!("{c:?}: {e}"),
            })
        })
        .collect()
}

/// CSV rendering of edge-sample draws: header `value_0..value_{k-1}`, one
/// row per draw in sample order.
pub fn samples_csv(rows: &[Vec<f64>]) -> Result<String, HarnessError> {
    let k = match rows.first() {
        Some(r) if !r.is_empty() => r.len(),
        _ => return Err(HarnessError::BadRows),
    };
    if rows.iter().any(|r| r.len() != k) {
        return Err(HarnessError::BadRows);
    }
    let header: Vec<String> = (0..k).map(|j| format!("value_{j}")).collect();
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Persist edge-sample draws with their manifest sidecar.
pub fn write_samples(
    rows: &[Vec<f64>],
    manifest: &RunManifest,
    path: &Path,
) -> Result<(), HarnessError> {
    atomic_write(path, &samples_csv(rows)?)?;
    let mut m = manifest.to_json()?;
    m.push('\n');
    atomic_write(&manifest_path(path), &m)
}

pub fn read_samples(path: &Path) -> Result<Vec<Vec<f64>>, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let k = match lines.next() {
        Some((_, header)) => {
            let cols: Vec<&str> = header.split(',').collect();
            let ok = cols.iter().enumerate().all(|(j, c)| *c == format!("value_{j}"));
            if !ok || cols.is_empty() {
                return Err(HarnessError::Parse {
                    line: 1,
                    msg: "expected header value_0,value_1,...".to_string(),
                });
            }
            cols.len()
        }
        None => return Err(HarnessError::Parse { line: 1, msg: "empty file".to_string() }),
    };
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        rows.push(parse_row(line, idx + 1, k)?);
    }
    if rows.is_empty() {
        return Err(HarnessError::Parse { line: 2, msg: "no data rows".to_string() });
    }
    Ok(rows)
}
