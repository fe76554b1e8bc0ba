//! Command-line front end: every subcommand is a thin wrapper over the
//! library plus CSV persistence, so that a run is reproducible from its
//! manifest sidecar alone.

mod plot;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use edgekit::harness::{
    self, atomic_write, manifest_path, read_cdf_table, read_samples, run_experiment, stats,
    ExperimentConfig, RouteParams, RunManifest,
};
use edgekit::riccati::{self, TailSide};
use edgekit::RiccatiConfig;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "edgekit",
    version,
    about = "Samplers, diffusion estimators and reference curves for the spectral edge of beta ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw scaled edge eigenvalues from the tridiagonal Hermite model
    EdgeHermite {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        beta: f64,
        /// How many of the lowest scaled levels to keep per draw
        #[arg(long)]
        k: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw scaled edge eigenvalues from the tridiagonal Laguerre model
    EdgeLaguerre {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw low-lying eigenvalues of the discretized random operator
    Sao {
        #[arg(long)]
        beta: f64,
        /// Grid step of the discretization
        #[arg(long)]
        h: f64,
        /// Dirichlet cutoff; enlarged automatically if the spectrum crowds it
        #[arg(long)]
        xmax: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the ground-state survival curve by explosion counting
    RiccatiCdf {
        #[arg(long)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda_max: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Restart height standing in for +infinity (default 1e3)
        #[arg(long)]
        cap: Option<f64>,
        /// Integration step ceiling (default 1e-3)
        #[arg(long)]
        dt_max: Option<f64>,
        /// Settling distance before survival may be declared (default 10)
        #[arg(long)]
        horizon_margin: Option<f64>,
    },
    /// Evaluate the deterministic reference survival curve (beta 1, 2 or 4)
    TwReference {
        #[arg(long)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda_max: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate tail probabilities of the lowest level at given offsets
    Tails {
        #[arg(long)]
        beta: f64,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Comma-separated positive offsets, e.g. 1.5,2.5,3.5
        #[arg(long)]
        a: String,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two result files of the same kind
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Render a result file as an SVG image
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Right,
    Left,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::EdgeHermite { n, beta, k, samples, seed, out } => {
            let params = serde_json::json!({
                "command": "edge-hermite", "n": n, "beta": beta, "k": k, "samples": samples,
            });
            sample_run(RouteParams::Hermite { n }, beta, k, samples, seed, &out, params)
        }
        Command::EdgeLaguerre { n, kappa, beta, k, samples, seed, out } => {
            let params = serde_json::json!({
                "command": "edge-laguerre", "n": n, "kappa": kappa, "beta": beta, "k": k,
                "samples": samples,
            });
            sample_run(RouteParams::Laguerre { n, kappa }, beta, k, samples, seed, &out, params)
        }
        Command::Sao { beta, h, xmax, k, samples, seed, out } => {
            let params = serde_json::json!({
                "command": "sao", "beta": beta, "h": h, "xmax": xmax, "k": k, "samples": samples,
            });
            sample_run(RouteParams::Sao { h, x_max: xmax }, beta, k, samples, seed, &out, params)
        }
        Command::RiccatiCdf {
            beta,
            lambda_min,
            lambda_max,
            points,
            samples,
            seed,
            out,
            cap,
            dt_max,
            horizon_margin,
        } => {
            let mut config = RiccatiConfig::default();
            if let Some(c) = cap {
                config.cap = c;
                config.blow_threshold = -c;
            }
            if let Some(dt) = dt_max {
                config.dt_max = dt;
            }
            if let Some(m) = horizon_margin {
                config.horizon_margin = m;
            }
            let cfg = ExperimentConfig {
                route: RouteParams::Riccati { config },
                beta,
                lambda_grid: linspace(lambda_min, lambda_max, points)?,
                samples,
                master_seed: seed,
                out: Some(out.clone()),
            };
            let est = run_experiment(&cfg).context("riccati estimation failed")?;
            if est.flagged() {
                eprintln!(
                    "warning: {} of {} paths undecided; consider a larger horizon",
                    est.undecided(),
                    est.samples()
                );
            }
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::TwReference { beta, lambda_min, lambda_max, points, out } => {
            let cfg = ExperimentConfig {
                route: RouteParams::Painleve,
                beta,
                lambda_grid: linspace(lambda_min, lambda_max, points)?,
                samples: 0,
                master_seed: 0,
                out: Some(out.clone()),
            };
            run_experiment(&cfg).context("reference evaluation failed (beta must be 1, 2 or 4)")?;
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Tails { beta, side, a, samples, seed, out } => {
            tails_run(beta, side, &a, samples, seed, &out)
        }
        Command::Compare { a, b } => compare(&a, &b),
        Command::Plot { input, out } => {
            let svg = plot::render(&input)?;
            atomic_write(&out, &svg)?;
            println!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn linspace(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        bail!("--points must be at least 1");
    }
    if points == 1 {
        if lo != hi {
            bail!("--points 1 needs --lambda-min equal to --lambda-max");
        }
        return Ok(vec![lo]);
    }
    if !(lo < hi) {
        bail!("--lambda-min must be below --lambda-max");
    }
    Ok((0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect())
}

fn sample_run(
    route: RouteParams,
    beta: f64,
    k: usize,
    samples: usize,
    seed: u64,
    out: &Path,
    params: serde_json::Value,
) -> Result<()> {
    let start = std::time::Instant::now();
    let rows = harness::draw_edge_values(&route, beta, k, samples, seed)
        .context("edge sampling failed")?;
    let manifest = RunManifest::new(seed, params, start.elapsed().as_secs_f64());
    harness::write_samples(&rows, &manifest, out)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn tails_run(beta: f64, side: SideArg, a: &str, samples: usize, seed: u64, out: &Path) -> Result<()> {
    let offsets: Vec<f64> = a
        .split(',')
        .map(|tok| tok.trim().parse::<f64>().with_context(|| format!("bad offset {tok:?}")))
        .collect::<Result<_>>()?;
    let side = match side {
        SideArg::Right => TailSide::Right,
        SideArg::Left => TailSide::Left,
    };
    let start = std::time::Instant::now();
    let cfg = RiccatiConfig::default();
    let est = riccati::tail_probability(beta, &offsets, side, samples, &cfg, seed)
        .context("tail estimation failed")?;
    let mut csv = String::from("a,estimate,stderr,hits,samples,upper95\n");
    for t in &est {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            t.a, t.estimate, t.stderr, t.hits, t.samples, t.upper95
        ));
    }
    atomic_write(out, &csv)?;
    let params = serde_json::json!({
        "command": "tails",
        "beta": beta,
        "side": match side { TailSide::Right => "right", TailSide::Left => "left" },
        "a": offsets,
        "samples": samples,
        "config": cfg,
    });
    let mut manifest = RunManifest::new(seed, params, start.elapsed().as_secs_f64()).to_json()?;
    manifest.push('\n');
    atomic_write(&manifest_path(out), &manifest)?;
    for t in &est {
        if t.zero_hit() {
            eprintln!("note: no hits at a = {}; estimate 0, 95% upper bound {:.3e}", t.a, t.upper95);
        }
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn file_kind(path: &Path) -> Result<&'static str> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let header = text.lines().next().unwrap_or_default();
    if header == "lambda,survival,stderr" {
        Ok("cdf")
    } else if header.starts_with("value_0") {
        Ok("samples")
    } else if header == "a,estimate,stderr,hits,samples,upper95" {
        Ok("tails")
    } else {
        bail!("{}: unrecognized header {:?}", path.display(), header)
    }
}

fn compare(a: &Path, b: &Path) -> Result<()> {
    let (ka, kb) = (file_kind(a)?, file_kind(b)?);
    if ka != kb {
        bail!("cannot compare a {ka} file with a {kb} file");
    }
    match ka {
        "cdf" => {
            let ta = read_cdf_table(a)?;
            let tb = read_cdf_table(b)?;
            if ta.lambda != tb.lambda {
                bail!("lambda grids differ; re-run one side on the other's grid");
            }
            println!("kind: cdf");
            println!("points: {}", ta.lambda.len());
            let mut sup = 0.0f64;
            for i in 0..ta.lambda.len() {
                let diff = ta.survival[i] - tb.survival[i];
                sup = sup.max(diff.abs());
                let denom = (ta.stderr[i] * ta.stderr[i] + tb.stderr[i] * tb.stderr[i]).sqrt();
                let z = if denom > 0.0 {
                    diff / denom
                } else if diff == 0.0 {
                    0.0
                } else {
                    f64::INFINITY * diff.signum()
                };
                println!(
                    "lambda={} a={} b={} z={:+.3}",
                    ta.lambda[i], ta.survival[i], tb.survival[i], z
                );
            }
            println!("sup_diff: {sup}");
        }
        "samples" => {
            let ra = read_samples(a)?;
            let rb = read_samples(b)?;
            if ra[0].len() != rb[0].len() {
                bail!("files hold {} vs {} values per draw", ra[0].len(), rb[0].len());
            }
            println!("kind: samples");
            println!("rows_a: {} rows_b: {}", ra.len(), rb.len());
            let cols = ra[0].len();
            let mut worst = 0.0f64;
            for j in 0..cols {
                let ca: Vec<f64> = ra.iter().map(|r| r[j]).collect();
                let cb: Vec<f64> = rb.iter().map(|r| r[j]).collect();
                let d = stats::ks_distance(&ca, &cb)?;
                worst = worst.max(d);
                println!("ks[value_{j}] = {d}");
            }
            println!("max_ks: {worst}");
        }
        "tails" => {
            // per-offset z-scores on log-free scale; offsets must align
            let ta = read_tails(a)?;
            let tb = read_tails(b)?;
            if ta.iter().map(|r| r.0).ne(tb.iter().map(|r| r.0)) {
                bail!("offset grids differ");
            }
            println!("kind: tails");
            for (ra, rb) in ta.iter().zip(&tb) {
                let denom = (ra.2 * ra.2 + rb.2 * rb.2).sqrt();
                let z = if denom > 0.0 { (ra.1 - rb.1) / denom } else { 0.0 };
                println!("a={} est_a={} est_b={} z={:+.3}", ra.0, ra.1, rb.1, z);
            }
        }
        _ => unreachable!(),
    }
    Ok(())
}

/// (a, estimate, stderr) rows of a tails CSV.
fn read_tails(path: &Path) -> Result<Vec<(f64, f64, f64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            bail!("{}: line {}: want 6 columns", path.display(), i + 1);
        }
        rows.push((cols[0].parse()?, cols[1].parse()?, cols[2].parse()?));
    }
    if rows.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    Ok(rows)
}
