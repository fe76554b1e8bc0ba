//! Distributional laws of the tridiagonal ensemble models: exact trace
//! moments pin the entry bookkeeping, and two-sample comparisons check that
//! both models land on the same scaled edge statistics.

mod common;

use edgekit::ensembles::{edge_sample, sample_hermite, sample_laguerre};
use edgekit::{EnsembleSpec, HermiteSpec, LaguerreSpec, RngStream};

#[test]
fn hermite_trace_moments() {
    // E[tr H] = 0 and E[tr H^2] = 2n/beta + n(n-1), exactly, for every beta:
    // the first term is the N(0, 2/beta) diagonal, the second the chi ladder
    // with shapes beta, 2 beta, .., (n-1) beta
    for &beta in &[1.0, 2.0, 4.0, 0.7] {
        let n = 8;
        let spec = HermiteSpec::new(n, beta).unwrap();
        let m = 30_000;
        let (mut tr, mut tr2) = (0.0, 0.0);
        for id in 0..m {
            let t = sample_hermite(&spec, &mut RngStream::new(201, id));
            tr += t.diag().iter().sum::<f64>();
            tr2 += t.diag().iter().map(|d| d * d).sum::<f64>()
                + 2.0 * t.offdiag().iter().map(|e| e * e).sum::<f64>();
        }
        let nf = n as f64;
        let mean_tr = tr / m as f64;
        let mean_tr2 = tr2 / m as f64;
        let expect_tr2 = 2.0 * nf / beta + nf * (nf - 1.0);
        let se_tr = (2.0 * nf / beta / m as f64).sqrt();
        assert!(mean_tr.abs() < 5.0 * se_tr, "beta={beta} tr {mean_tr}");
        assert!(
            (mean_tr2 - expect_tr2).abs() < 0.02 * expect_tr2,
            "beta={beta} tr2 {mean_tr2} vs {expect_tr2}"
        );
    }
}

#[test]
fn hermite_diagonal_is_gaussian() {
    let spec = HermiteSpec::new(40, 2.0).unwrap();
    let mut entries = Vec::new();
    for id in 0..500 {
        let t = sample_hermite(&spec, &mut RngStream::new(202, id));
        entries.extend(t.diag().iter().copied());
    }
    // diagonal entries are N(0, 2/beta) = N(0, 1) at beta = 2
    let d = common::ks_brute_cdf(&entries, common::normal_cdf);
    assert!(d < 0.012, "KS {d}");
}

#[test]
fn laguerre_trace_matches_n_kappa() {
    // E[tr W] = n kappa for any aspect ratio, including the very lopsided one
    let (n, kappa) = (40usize, 40.0 * 40.0 * 0.9 + 40.0);
    let spec = LaguerreSpec::new(n, kappa, 2.0).unwrap();
    let m = 2000;
    let mut tr = 0.0;
    for id in 0..m {
        let t = sample_laguerre(&spec, &mut RngStream::new(203, id));
        tr += t.diag().iter().sum::<f64>();
    }
    let mean = tr / m as f64;
    let expect = n as f64 * kappa;
    // Var(tr W) = 2 n (kappa + n) / beta approximately; 5 se margin
    let se = (2.0 * n as f64 * (kappa + n as f64) / 2.0 / m as f64).sqrt();
    assert!((mean - expect).abs() < 5.0 * se, "mean {mean} vs {expect} (se {se})");
}

#[test]
fn laguerre_stays_positive_near_kappa_floor() {
    // kappa just above n - 1 puts the smallest chi shape near zero, so the
    // bottom eigenvalue is a numerical zero (and the tie convention may count
    // it at threshold 0); being a Gram matrix, nothing sits strictly below
    let spec = LaguerreSpec::new(25, 24.0 + 1e-3, 1.0).unwrap();
    for id in 0..200 {
        let t = sample_laguerre(&spec, &mut RngStream::new(204, id));
        assert_eq!(t.sturm_count(-1e-6 * t.scale()), 0);
    }
}

#[test]
fn largest_eigenvalue_sits_at_the_bulk_edge() {
    // semicircle edge at 2 sqrt(n): the top eigenvalue is within a few
    // n^{-1/6} fluctuations of it
    let n = 3000;
    let spec = HermiteSpec::new(n, 2.0).unwrap();
    for id in 0..5 {
        let t = sample_hermite(&spec, &mut RngStream::new(205, id));
        let top = t.eigen_extreme(1, edgekit::Which::Highest, 1e-8).unwrap()[0];
        let rel = top / (2.0 * (n as f64).sqrt()) - 1.0;
        assert!(rel.abs() < 0.05, "draw {id}: relative offset {rel}");
    }
}

#[test]
fn hermite_and_laguerre_share_an_edge_law() {
    // both models, scaled, sample the same limit; a two-sample KS at
    // moderate n should sit near its sampling floor (~0.03 at these sizes)
    let m = 1500;
    let hs = EnsembleSpec::Hermite(HermiteSpec::new(800, 2.0).unwrap());
    let ls = EnsembleSpec::Laguerre(LaguerreSpec::new(800, 800.0, 2.0).unwrap());
    let mut hvals = Vec::with_capacity(m);
    let mut lvals = Vec::with_capacity(m);
    for id in 0..m {
        hvals.push(edge_sample(&hs, 1, &mut RngStream::new(206, id as u64)).unwrap().values()[0]);
        lvals.push(edge_sample(&ls, 1, &mut RngStream::new(207, id as u64)).unwrap().values()[0]);
    }
    let d = common::ks_brute(&hvals, &lvals);
    assert!(d < 0.08, "KS {d}");
}

#[test]
fn edge_values_are_ascending_and_distinct() {
    let spec = EnsembleSpec::Hermite(HermiteSpec::new(120, 1.0).unwrap());
    for id in 0..100 {
        let s = edge_sample(&spec, 4, &mut RngStream::new(208, id)).unwrap();
        assert!(s.values().windows(2).all(|w| w[0] < w[1]), "draw {id}: {:?}", s.values());
    }
}

#[test]
fn beta_ordering_of_edge_means() {
    // larger beta pushes the top eigenvalue closer to the deterministic edge:
    // the scaled ground state mean grows with beta (about 1.21, 1.77, 2.06)
    let m = 800;
    let mut means = Vec::new();
    for (si, &beta) in [1.0f64, 2.0, 4.0].iter().enumerate() {
        let spec = EnsembleSpec::Hermite(HermiteSpec::new(500, beta).unwrap());
        let mut total = 0.0;
        for id in 0..m {
            total +=
                edge_sample(&spec, 1, &mut RngStream::new(209 + si as u64, id as u64)).unwrap().values()[0];
        }
        means.push(total / m as f64);
    }
    assert!(means[0] < means[1] && means[1] < means[2], "{means:?}");
}
