//! Distribution-comparison statistics: Kolmogorov-Smirnov distances, Wilson
//! score intervals, and the power-law slope fits used for tail checks.

use super::HarnessError;

fn require_finite(xs: &[f64]) -> Result<(), HarnessError> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(HarnessError::NonFinite);
    }
    Ok(())
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64, HarnessError> {
    if a.is_empty() || b.is_empty() {
        return Err(HarnessError::EmptySamples);
    }
    require_finite(a)?;
    require_finite(b)?;
    let (sa, sb) = (sorted(a), sorted(b));
    let (n, m) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < sa.len() && j < sb.len() {
        let v = sa[i].min(sb[j]);
        while i < sa.len() && sa[i] == v {
            i += 1;
        }
        while j < sb.len() && sb[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// One-sample statistic of `samples` against a reference CDF, evaluating
/// both sides of each empirical jump.
pub fn ks_distance_cdf<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64, HarnessError> {
    if samples.is_empty() {
        return Err(HarnessError::EmptySamples);
    }
    require_finite(samples)?;
    let s = sorted(samples);
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        if !f.is_finite() {
            return Err(HarnessError::NonFinite);
        }
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Standard normal quantile: Acklam's rational approximation polished by two
/// Newton steps against the erfc-based CDF, accurate to ~1e-14 for p away
/// from the extreme denormal range.
pub fn normal_quantile(p: f64) -> Result<f64, HarnessError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(HarnessError::BadLevel(p));
    }
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let mut z = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    for _ in 0..2 {
        let cdf = 0.5 * libm::erfc(-z * std::f64::consts::FRAC_1_SQRT_2);
        let pdf = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
        z -= (cdf - p) / pdf;
    }
    Ok(z)
}

/// Wilson score interval for a binomial proportion at the given two-sided
/// confidence level. Degenerate counts pin the matching endpoint exactly.
pub fn binomial_ci(successes: usize, trials: usize, level: f64) -> Result<(f64, f64), HarnessError> {
    if trials == 0 || successes > trials {
        return Err(HarnessError::BadCounts { successes, trials });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(HarnessError::BadLevel(level));
    }
    let z = normal_quantile(1.0 - 0.5 * (1.0 - level))?;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    Ok((lo, hi))
}

/// Tail geometry for [`fit_tail_exponent`]: which power of the offset the
/// log-probability is regressed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailLaw {
    /// log P vs a^(3/2); the limit-law prediction is slope -(2/3)beta.
    Right,
    /// log P vs a^3; predicted slope -beta/24.
    Left,
}

/// Least-squares slope of log-probabilities against the transformed offsets,
/// plus r². The fit is over sums, so point order is irrelevant.
pub fn fit_tail_exponent(
    a_values: &[f64],
    log_probs: &[f64],
    law: TailLaw,
) -> Result<(f64, f64), HarnessError> {
    if a_values.len() < 3 || a_values.len() != log_probs.len() {
        return Err(HarnessError::TooFewPoints { found: a_values.len().min(log_probs.len()) });
    }
    require_finite(a_values)?;
    require_finite(log_probs)?;
    if a_values.iter().any(|&a| a <= 0.0) {
        return Err(HarnessError::NonFinite);
    }
    let t: Vec<f64> = a_values
        .iter()
        .map(|&a| match law {
            TailLaw::Right => a * a.sqrt(),
            TailLaw::Left => a * a * a,
        })
        .collect();
    let n = t.len() as f64;
    let mt = t.iter().sum::<f64>() / n;
    let my = log_probs.iter().sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for (ti, yi) in t.iter().zip(log_probs) {
        let (dt, dy) = (ti - mt, yi - my);
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if stt == 0.0 {
        return Err(HarnessError::NonFinite);
    }
    let slope = sty / stt;
    let r2 = if syy == 0.0 { 1.0 } else { (sty * sty) / (stt * syy) };
    Ok((slope, r2))
}
