//! Pathwise sampler for the edge spectrum through the first-order diffusion
//! dp = -(2/sqrt(beta)) db + (x - lambda - p^2) dx started from a large cap.
//!
//! Each finite-time explosion of p to -infinity marks one eigenvalue at most
//! lambda, so counting explosions and bisecting over lambda on a frozen noise
//! path draws the ordered levels directly. The count is nondecreasing in
//! lambda path by path, which is what makes the per-path bisection and all
//! shared-draw monotonicity guarantees work.

use crate::harness::{self, CdfEstimate, Method, RunManifest};
use crate::randkit::RngStream;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum RiccatiError {
    #[error("cap must be positive and finite, got {0}")]
    BadCap(f64),
    #[error("blow_threshold {threshold} must be <= -cap = {}", -cap)]
    BadThreshold { threshold: f64, cap: f64 },
    #[error("dt_max must be positive and finite, got {0}")]
    BadStepCeiling(f64),
    #[error("adapt_c must be positive and finite, got {0}")]
    BadAdapt(f64),
    #[error("{name} must be positive and finite, got {value}")]
    BadMargin { name: &'static str, value: f64 },
    #[error("beta must be positive, got {0}")]
    BadBeta(f64),
    #[error("bracket ({lo}, {hi}) is not an increasing finite pair")]
    BadBracket { lo: f64, hi: f64 },
    #[error("bisection tolerance must be positive and finite, got {0}")]
    BadTol(f64),
    #[error("no enclosing bracket found after widening to ({lo}, {hi})")]
    WidenFailed { lo: f64, hi: f64 },
    #[error("path undecided at lambda = {lambda}: x-budget exhausted before the survival criterion")]
    Undecided { lambda: f64 },
    #[error("every path was undecided; estimate impossible with this config")]
    AllUndecided,
    #[error("lambda grid must be nonempty, finite, and strictly increasing")]
    BadGrid,
    #[error("samples must be >= 1")]
    NoSamples,
    #[error("tail offset a must be positive and finite, got {0}")]
    BadTailOffset(f64),
    #[error("estimate assembly failed: {0}")]
    Estimate(String),
}

/// Truncation parameters standing in for the idealized restart-at-infinity
/// dynamics. Defaults follow the usual desk-scale choice: cap 10^3 (the time
/// lost by restarting there instead of at infinity is about 1/cap), symmetric
/// blowup threshold, millistep ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiccatiConfig {
    pub cap: f64,
    pub blow_threshold: f64,
    pub dt_max: f64,
    pub adapt_c: f64,
    pub horizon_margin: f64,
    pub survive_margin: f64,
}

impl Default for RiccatiConfig {
    fn default() -> Self {
        RiccatiConfig {
            cap: 1e3,
            blow_threshold: -1e3,
            dt_max: 1e-3,
            adapt_c: 0.1,
            horizon_margin: 10.0,
            survive_margin: 1.0,
        }
    }
}

impl RiccatiConfig {
    pub fn validate(&self) -> Result<(), RiccatiError> {
        if !(self.cap > 0.0) || !self.cap.is_finite() {
            return Err(RiccatiError::BadCap(self.cap));
        }
        if !(self.blow_threshold <= -self.cap) {
            return Err(RiccatiError::BadThreshold { threshold: self.blow_threshold, cap: self.cap });
        }
        if !(self.dt_max > 0.0) || !self.dt_max.is_finite() {
            return Err(RiccatiError::BadStepCeiling(self.dt_max));
        }
        if !(self.adapt_c > 0.0) || !self.adapt_c.is_finite() {
            return Err(RiccatiError::BadAdapt(self.adapt_c));
        }
        if !(self.horizon_margin > 0.0) || !self.horizon_margin.is_finite() {
            return Err(RiccatiError::BadMargin { name: "horizon_margin", value: self.horizon_margin });
        }
        if !(self.survive_margin > 0.0) || !self.survive_margin.is_finite() {
            return Err(RiccatiError::BadMargin { name: "survive_margin", value: self.survive_margin });
        }
        Ok(())
    }

    /// Hard integration limit: survival can be declared no earlier than
    /// max(lambda, 0) + horizon_margin, so the budget leaves two further
    /// horizons of slack for explosions arriving late and the re-wait after
    /// them. Exhausting it yields an undecided record, never a silent guess.
    #[must_use]
    pub fn x_budget(&self, lambda: f64) -> f64 {
        lambda.max(0.0) + 3.0 * self.horizon_margin
    }
}

/// Outcome of integrating one path at one lambda. `survived == false` means
/// the x-budget ran out before the survival criterion held: the explosion
/// list is then a lower bound, and callers must treat the path as undecided
/// rather than explosion-free.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplosionRecord {
    lambda: f64,
    times: Vec<f64>,
    survived: bool,
    x_end: f64,
}

impl ExplosionRecord {
    #[must_use]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// x-locations of the explosions, strictly increasing.
    #[must_use]
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    #[must_use]
    pub fn count(&self) -> usize {
        self.times.len()
    }

    #[must_use]
    pub fn survived(&self) -> bool {
        self.survived
    }

    #[must_use]
    pub fn x_end(&self) -> f64 {
        self.x_end
    }
}

/// One Brownian path, stored as cumulative values on the fixed grid of step
/// dt_max and extended lazily as integration advances. The adaptive stepper
/// reads increments through linear interpolation, so every lambda evaluated
/// on the same `NoisePath` sees the same driving noise regardless of how its
/// step sequence lands, which is the coupling the lambda-bisection needs.
#[derive(Debug)]
pub struct NoisePath {
    dt: f64,
    root_dt: f64,
    cum: Vec<f64>,
}

impl NoisePath {
    #[must_use]
    pub fn new(dt: f64) -> Self {
        assert!(dt > 0.0 && dt.is_finite(), "grid step must be positive");
        NoisePath { dt, root_dt: dt.sqrt(), cum: vec![0.0] }
    }

    /// Forget the path but keep the allocation; the next increment request
    /// starts a fresh realization.
    pub fn reset(&mut self) {
        self.cum.clear();
        self.cum.push(0.0);
    }

    fn value(&mut self, x: f64, stream: &mut RngStream) -> f64 {
        let t = x / self.dt;
        let j = t as usize;
        while self.cum.len() <= j + 1 {
            let last = *self.cum.last().unwrap();
            self.cum.push(last + self.root_dt * stream.standard_normal());
        }
        let frac = t - j as f64;
        self.cum[j] + frac * (self.cum[j + 1] - self.cum[j])
    }

    fn increment(&mut self, x0: f64, x1: f64, stream: &mut RngStream) -> f64 {
        self.value(x1, stream) - self.value(x0, stream)
    }
}

enum Noise<'a> {
    /// Independent N(0, dt) increments drawn as the stepper goes.
    Fresh(&'a mut RngStream),
    /// Increments read from a frozen path, interpolated.
    Shared(&'a mut NoisePath, &'a mut RngStream),
}

impl Noise<'_> {
    fn increment(&mut self, x0: f64, x1: f64) -> f64 {
        match self {
            Noise::Fresh(stream) => (x1 - x0).sqrt() * stream.standard_normal(),
            Noise::Shared(path, stream) => path.increment(x0, x1, stream),
        }
    }
}

/// Euler-Maruyama core. The path survives once it sits on or above the
/// attracting branch sqrt(max(x - lambda, 0)) minus survive_margin, with x
/// beyond both the last explosion and lambda by horizon_margin; the margin
/// is subtracted because the surviving trajectory approaches that branch
/// from below (p ~ sqrt(x - lambda) - 1/(4(x - lambda))), and the gate past
/// lambda keeps the check disarmed while the parabola is still too narrow
/// to hold the path.
fn integrate(lambda: f64, beta: f64, cfg: &RiccatiConfig, mut noise: Noise) -> ExplosionRecord {
    let noise_amp = 2.0 / beta.sqrt();
    let budget = cfg.x_budget(lambda);
    let mut p = cfg.cap;
    let mut x = 0.0;
    let mut last_explosion = 0.0;
    let mut times = Vec::new();
    loop {
        if x >= lambda.max(last_explosion) + cfg.horizon_margin {
            let branch = (x - lambda).max(0.0).sqrt();
            if p >= branch - cfg.survive_margin {
                return ExplosionRecord { lambda, times, survived: true, x_end: x };
            }
        }
        if x >= budget {
            return ExplosionRecord { lambda, times, survived: false, x_end: x };
        }
        let dt = cfg.dt_max.min(cfg.adapt_c / (1.0 + p * p));
        let db = noise.increment(x, x + dt);
        p += (x - lambda - p * p) * dt - noise_amp * db;
        x += dt;
        if p <= cfg.blow_threshold {
            times.push(x);
            last_explosion = x;
            p = cfg.cap;
        }
    }
}

fn check_run_args(beta: f64, cfg: &RiccatiConfig) -> Result<(), RiccatiError> {
    if !(beta > 0.0) {
        return Err(RiccatiError::BadBeta(beta));
    }
    cfg.validate()
}

/// Integrate one path at one lambda with independent per-step increments.
pub fn simulate_path(
    lambda: f64,
    beta: f64,
    cfg: &RiccatiConfig,
    stream: &mut RngStream,
) -> Result<ExplosionRecord, RiccatiError> {
    check_run_args(beta, cfg)?;
    Ok(integrate(lambda, beta, cfg, Noise::Fresh(stream)))
}

/// Same integration, but driven by a frozen path so several lambdas can be
/// evaluated against identical noise. The stream only feeds lazy extension
/// of the path; replaying a lambda on an already-long path draws nothing.
pub fn simulate_on_path(
    lambda: f64,
    beta: f64,
    cfg: &RiccatiConfig,
    path: &mut NoisePath,
    stream: &mut RngStream,
) -> Result<ExplosionRecord, RiccatiError> {
    check_run_args(beta, cfg)?;
    Ok(integrate(lambda, beta, cfg, Noise::Shared(path, stream)))
}

/// Number of explosions before the path settles. Errors with `Undecided`
/// when the budget ran out, since the true count could be larger.
pub fn count_explosions(
    lambda: f64,
    beta: f64,
    cfg: &RiccatiConfig,
    stream: &mut RngStream,
) -> Result<usize, RiccatiError> {
    let rec = simulate_path(lambda, beta, cfg, stream)?;
    if !rec.survived() {
        return Err(RiccatiError::Undecided { lambda });
    }
    Ok(rec.count())
}

const WIDEN_STEP: f64 = 2.0;
const MAX_WIDEN: usize = 10;

/// Shared-path count classified against a target: does the path explode at
/// least `target` times at this lambda? Undecided paths can still answer yes
/// (the recorded explosions are real); they only fail to certify "fewer".
fn at_least(
    target: usize,
    lambda: f64,
    beta: f64,
    cfg: &RiccatiConfig,
    path: &mut NoisePath,
    stream: &mut RngStream,
) -> Result<bool, RiccatiError> {
    let rec = integrate(lambda, beta, cfg, Noise::Shared(path, stream));
    if rec.count() >= target {
        return Ok(true);
    }
    if !rec.survived() {
        return Err(RiccatiError::Undecided { lambda });
    }
    Ok(false)
}

/// One joint draw of the lowest k+1 levels: freeze a noise path, then for
/// each j locate the lambda-threshold where the explosion count first
/// reaches j+1, bisected to width `tol`. The thresholds are the levels
/// themselves, and sharing the path across all of them is what makes the
/// joint draw exchangeable with one operator draw.
pub fn sample_lambda_k(
    beta: f64,
    k: usize,
    cfg: &RiccatiConfig,
    stream: &mut RngStream,
    bracket: (f64, f64),
    tol: f64,
) -> Result<Vec<f64>, RiccatiError> {
    check_run_args(beta, cfg)?;
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(RiccatiError::BadBracket { lo, hi });
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(RiccatiError::BadTol(tol));
    }
    let mut path = NoisePath::new(cfg.dt_max);
    let p = &mut path;

    // establish count(lo) = 0 and count(hi) >= k+1, widening outward
    let mut step = WIDEN_STEP;
    let mut widens = 0;
    while at_least(1, lo, beta, cfg, p, stream)? {
        lo -= step;
        step *= 2.0;
        widens += 1;
        if widens > MAX_WIDEN {
            return Err(RiccatiError::WidenFailed { lo, hi });
        }
    }
    let mut step = WIDEN_STEP;
    let mut widens = 0;
    while !at_least(k + 1, hi, beta, cfg, p, stream)? {
        hi += step;
        step *= 2.0;
        widens += 1;
        if widens > MAX_WIDEN {
            return Err(RiccatiError::WidenFailed { lo, hi });
        }
    }

    let mut out = Vec::with_capacity(k + 1);
    for j in 0..=k {
        // invariant: count(lo) <= j < count(hi); previous level's lo is
        // still valid because counts there were below j+1 <= j+2
        let (mut a, mut b) = (lo, hi);
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if at_least(j + 1, mid, beta, cfg, p, stream)? {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
        lo = a;
    }
    Ok(out)
}

/// One draw of the lowest level.
pub fn sample_lambda0(
    beta: f64,
    cfg: &RiccatiConfig,
    stream: &mut RngStream,
    bracket: (f64, f64),
    tol: f64,
) -> Result<f64, RiccatiError> {
    Ok(sample_lambda_k(beta, 0, cfg, stream, bracket, tol)?[0])
}

/// Bracket and bisection width used when the caller does not care.
pub const DEFAULT_BRACKET: (f64, f64) = (-5.0, 8.0);
pub const DEFAULT_TOL: f64 = 1e-3;

/// Monte Carlo estimate of lambda -> P(lowest level > lambda) on a grid.
///
/// Sample i always uses stream i of the master seed, so the estimate is a
/// pure function of (arguments, master_seed) no matter how many workers run.
/// All grid points share the same draws, hence the survival estimates are
/// exactly nonincreasing. Undecided paths are excluded from the fraction but
/// counted and reported; they are typically absent entirely.
pub fn estimate_cdf(
    beta: f64,
    lambda_grid: &[f64],
    samples: usize,
    cfg: &RiccatiConfig,
    master_seed: u64,
) -> Result<CdfEstimate, RiccatiError> {
    check_run_args(beta, cfg)?;
    if lambda_grid.is_empty()
        || lambda_grid.iter().any(|l| !l.is_finite())
        || lambda_grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(RiccatiError::BadGrid);
    }
    if samples == 0 {
        return Err(RiccatiError::NoSamples);
    }
    let start = std::time::Instant::now();
    let draws: Vec<Option<f64>> = harness::pool()
        .install(|| {
            (0..samples as u64)
                .into_par_iter()
                .map(|i| {
                    let mut stream = RngStream::new(master_seed, i);
                    match sample_lambda0(beta, cfg, &mut stream, DEFAULT_BRACKET, DEFAULT_TOL) {
                        Ok(l) => Ok(Some(l)),
                        Err(RiccatiError::Undecided { .. }) => Ok(None),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<_, RiccatiError>>()
        })?;
    let undecided = draws.iter().filter(|d| d.is_none()).count();
    let decided = samples - undecided;
    if decided == 0 {
        return Err(RiccatiError::AllUndecided);
    }
    let mut survival = Vec::with_capacity(lambda_grid.len());
    let mut stderr = Vec::with_capacity(lambda_grid.len());
    for &l in lambda_grid {
        let hits = draws.iter().flatten().filter(|&&v| v > l).count();
        let p = hits as f64 / decided as f64;
        survival.push(p);
        stderr.push((p * (1.0 - p) / decided as f64).sqrt());
    }
    let params = serde_json::json!({
        "beta": beta,
        "config": cfg,
        "bracket": DEFAULT_BRACKET,
        "tol": DEFAULT_TOL,
        "samples": samples,
        "undecided": undecided,
    });
    let manifest = RunManifest::new(master_seed, params, start.elapsed().as_secs_f64());
    CdfEstimate::new(
        lambda_grid.to_vec(),
        survival,
        stderr,
        samples,
        undecided,
        Method::Riccati,
        beta,
        manifest,
    )
    .map_err(|e| RiccatiError::Estimate(e.to_string()))
}

/// Which extreme of the limit law a tail estimate targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TailSide {
    /// P(lowest level < -a): at least one explosion at lambda = -a.
    Right,
    /// P(lowest level > a): no explosion at lambda = a.
    Left,
}

/// A tail point estimate with its uncertainty. `hits == 0` is reported as
/// estimate zero plus an exact one-sided 95% upper bound instead of the
/// useless zero binomial stderr.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailEstimate {
    pub a: f64,
    pub side: TailSide,
    pub estimate: f64,
    pub stderr: f64,
    pub hits: usize,
    pub samples: usize,
    pub upper95: f64,
}

impl TailEstimate {
    /// True when no path hit the event, so only the upper bound is informative.
    #[must_use]
    pub fn zero_hit(&self) -> bool {
        self.hits == 0
    }
}

/// Estimate P(lowest level < -a) (right) or P(lowest level > a) (left) for
/// each offset by direct path counting, no bisection. All offsets share the
/// per-sample noise path, so the right-tail estimates are nonincreasing in a
/// by the same coupling that orders explosion counts.
pub fn tail_probability(
    beta: f64,
    a_values: &[f64],
    side: TailSide,
    samples: usize,
    cfg: &RiccatiConfig,
    master_seed: u64,
) -> Result<Vec<TailEstimate>, RiccatiError> {
    check_run_args(beta, cfg)?;
    if a_values.is_empty() || a_values.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
        return Err(RiccatiError::BadTailOffset(a_values.first().copied().unwrap_or(f64::NAN)));
    }
    if samples == 0 {
        return Err(RiccatiError::NoSamples);
    }
    let hit_counts: Vec<Vec<bool>> = harness::pool().install(|| {
        (0..samples as u64)
            .into_par_iter()
            .map_init(
                || NoisePath::new(cfg.dt_max),
                |path, i| {
                    let mut stream = RngStream::new(master_seed, i);
                    path.reset();
                    a_values
                        .iter()
                        .map(|&a| {
                            let lambda = match side {
                                TailSide::Right => -a,
                                TailSide::Left => a,
                            };
                            let rec = integrate(lambda, beta, cfg, Noise::Shared(path, &mut stream));
                            match side {
                                TailSide::Right => Ok(rec.count() >= 1),
                                TailSide::Left => {
                                    if !rec.survived() {
                                        return Err(RiccatiError::Undecided { lambda });
                                    }
                                    Ok(rec.count() == 0)
                                }
                            }
                        })
                        .collect::<Result<Vec<bool>, RiccatiError>>()
                },
            )
            .collect::<Result<_, RiccatiError>>()
    })?;
    Ok(a_values
        .iter()
        .enumerate()
        .map(|(j, &a)| {
            let hits = hit_counts.iter().filter(|row| row[j]).count();
            let p = hits as f64 / samples as f64;
            let upper95 = if hits == 0 {
                1.0 - 0.05f64.powf(1.0 / samples as f64)
            } else {
                harness::stats::binomial_ci(hits, samples, 0.90).unwrap().1
            };
            TailEstimate {
                a,
                side,
                estimate: p,
                stderr: (p * (1.0 - p) / samples as f64).sqrt(),
                hits,
                samples,
                upper95,
            }
        })
        .collect())
}
