//! Distributional checks on the stream generator: the scalar samplers must
//! actually follow the laws their names claim, under seeds fixed here.

mod common;

use edgekit::RngStream;

#[test]
fn uniform_matches_its_cdf() {
    let mut s = RngStream::new(101, 0);
    let draws: Vec<f64> = (0..20_000).map(|_| s.uniform()).collect();
    let d = common::ks_brute_cdf(&draws, |x| x.clamp(0.0, 1.0));
    // critical value at 1e-3 significance is ~1.36/sqrt(n) * 1.42 ~ 0.014
    assert!(d < 0.014, "uniform KS {d}");
    assert!(draws.iter().all(|&x| (0.0..1.0).contains(&x)));
}

#[test]
fn standard_normal_matches_its_cdf() {
    let mut s = RngStream::new(102, 3);
    let draws: Vec<f64> = (0..20_000).map(|_| s.standard_normal()).collect();
    let d = common::ks_brute_cdf(&draws, common::normal_cdf);
    assert!(d < 0.014, "normal KS {d}");
}

#[test]
fn chi_with_two_degrees_is_rayleigh() {
    // chi(2)^2 is Exp(mean 2), giving a closed-form cdf to test against
    let mut s = RngStream::new(103, 1);
    let draws: Vec<f64> = (0..20_000)
        .map(|_| {
            let c = s.sample_chi(2.0).unwrap();
            c * c
        })
        .collect();
    let d = common::ks_brute_cdf(&draws, |x| 1.0 - (-x / 2.0).exp());
    assert!(d < 0.014, "chi^2(2) KS {d}");
}

#[test]
fn chi_moments_track_the_parameter() {
    // E[chi(r)^2] = r and Var[chi(r)^2] = 2r, including fractional r
    for &r in &[0.371, 1.0, 4.6, 40.0] {
        let mut s = RngStream::new(104, 7);
        let n = 40_000;
        let sq: Vec<f64> = (0..n)
            .map(|_| {
                let c = s.sample_chi(r).unwrap();
                c * c
            })
            .collect();
        let mean = sq.iter().sum::<f64>() / n as f64;
        let var = sq.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        let se_mean = (2.0 * r / n as f64).sqrt();
        assert!((mean - r).abs() < 5.0 * se_mean, "r={r} mean {mean}");
        assert!((var / (2.0 * r) - 1.0).abs() < 0.15, "r={r} var {var}");
    }
}

#[test]
fn gaussian_mean_and_sd_are_honored() {
    let mut s = RngStream::new(105, 0);
    let n = 40_000;
    let draws: Vec<f64> = (0..n).map(|_| s.sample_gaussian(-3.0, 0.5).unwrap()).collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    assert!((mean + 3.0).abs() < 5.0 * 0.5 / (n as f64).sqrt());
    assert!((var.sqrt() - 0.5).abs() < 0.01);
}

#[test]
fn parallel_streams_are_uncorrelated() {
    // neighboring stream ids must look independent: sample correlation of
    // matched draws stays at the 1/sqrt(n) scale
    let n = 20_000;
    let mut a = RngStream::new(106, 0);
    let mut b = RngStream::new(106, 1);
    let xs: Vec<f64> = (0..n).map(|_| a.standard_normal()).collect();
    let ys: Vec<f64> = (0..n).map(|_| b.standard_normal()).collect();
    let corr = xs.iter().zip(&ys).map(|(x, y)| x * y).sum::<f64>() / n as f64;
    assert!(corr.abs() < 5.0 / (n as f64).sqrt(), "corr {corr}");
}
