//! Oracles shared by the integration suites. Everything here is written
//! against textbook definitions, independent of the crate's own numerics:
//! dense Jacobi diagonalization, a plain-f64 Airy series with literature
//! gamma constants, brute-force KS maximization, and a bisected normal
//! quantile for the Wilson interval.

#![allow(dead_code)]

/// Eigenvalues of a symmetric tridiagonal matrix by cyclic Jacobi rotations
/// on the dense matrix. Ascending. Good to ~1e-13 relative for the small n
/// used in tests.
pub fn dense_tridiag_eigs(diag: &[f64], offdiag: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        a[i][i] = diag[i];
    }
    for i in 0..n - 1 {
        a[i][i + 1] = offdiag[i];
        a[i + 1][i] = offdiag[i];
    }
    dense_sym_eigs(&mut a)
}

/// Cyclic Jacobi on a full symmetric matrix, in place. Ascending.
pub fn dense_sym_eigs(a: &mut [Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    if n == 1 {
        return vec![a[0][0]];
    }
    let scale: f64 = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, &x| m.max(x.abs()))
        .max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() < 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

// Ai(0) = 3^{-2/3}/Gamma(2/3) and Ai'(0) = -3^{-1/3}/Gamma(1/3), from
// literature values of Gamma(1/3) = 2.678938534707747633... and
// Gamma(2/3) = 1.354117939426400416...
const ORACLE_AI0: f64 = 0.35502805388781723926;
const ORACLE_AIP0: f64 = -0.25881940379280679841;

/// Ai(s) by the plain-f64 Maclaurin pair. Loses digits past |s| ~ 7 to
/// cancellation, which is fine for locating the first few negative zeros.
pub fn airy_series_f64(s: f64) -> f64 {
    let x3 = s * s * s;
    let mut t = 1.0f64;
    let mut u = s;
    let mut f = t;
    let mut g = u;
    for k in 0..200 {
        let kf = k as f64;
        t *= x3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        u *= x3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        f += t;
        g += u;
        if t.abs() < 1e-20 && u.abs() < 1e-20 {
            break;
        }
    }
    ORACLE_AI0 * f + ORACLE_AIP0 * g
}

/// First `count` zeros of Ai on the negative axis, returned as positive
/// magnitudes in increasing order: scan for sign changes, then bisect.
pub fn airy_zero_magnitudes(count: usize) -> Vec<f64> {
    let mut zeros = Vec::new();
    let mut s = -1.0f64;
    let mut prev = airy_series_f64(s);
    while zeros.len() < count && s > -7.5 {
        let next_s = s - 0.01;
        let next = airy_series_f64(next_s);
        if prev * next < 0.0 {
            let (mut lo, mut hi) = (next_s, s);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if airy_series_f64(mid) * airy_series_f64(lo) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            zeros.push(-0.5 * (lo + hi));
        }
        s = next_s;
        prev = next;
    }
    assert_eq!(zeros.len(), count, "scan range exhausted before {count} zeros");
    zeros
}

/// Two-sample KS by direct maximization over every sample point.
pub fn ks_brute(a: &[f64], b: &[f64]) -> f64 {
    let frac_le = |v: &[f64], t: f64| v.iter().filter(|&&x| x <= t).count() as f64 / v.len() as f64;
    let mut d = 0.0f64;
    for &t in a.iter().chain(b.iter()) {
        d = d.max((frac_le(a, t) - frac_le(b, t)).abs());
    }
    d
}

/// One-sample KS against a cdf closure, checking both sides of every jump.
pub fn ks_brute_cdf(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let n = v.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Standard normal cdf via the complementary error function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal quantile by bisection on the cdf; independent of the
/// rational approximation used in the crate.
pub fn normal_quantile_bisect(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    let (mut lo, mut hi) = (-10.0f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Wilson score interval straight from the textbook formula.
pub fn wilson_direct(successes: usize, trials: usize, level: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = normal_quantile_bisect(0.5 + level / 2.0);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (center - half, center + half)
}

/// Deterministic splitmix-style scrambler for building small test inputs
/// without depending on the crate's own generator.
pub fn scramble(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Uniform in [0, 1) from the scrambler.
pub fn unit(seed: u64) -> f64 {
    (scramble(seed) >> 11) as f64 / (1u64 << 53) as f64
}
