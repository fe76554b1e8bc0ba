//! The deterministic reference stack checked against independently computed
//! values: the Airy function against a plain series oracle and literature
//! constants, the connection solution against its known pointwise values,
//! and the three distribution curves against frozen high-precision numbers.

mod common;

use edgekit::painleve::{airy_ai, airy_ai_prime, solve_hastings_mcleod, tw_reference, TwBeta};
use edgekit::{PainleveConfig, PainleveSolution};

// (lambda, F_beta(lambda)) frozen from an independent high-precision run
const F2_TABLE: [(f64, f64); 9] = [
    (3.0, 0.999997005957),
    (2.0, 0.999887553698),
    (1.0, 0.997505438149),
    (0.0, 0.969372828355),
    (-1.0, 0.807214241999),
    (-2.0, 0.413224142505),
    (-3.0, 0.080319552939),
    (-4.0, 0.003544553596),
    (-6.0, 0.000000010623),
];
const F1_TABLE: [(f64, f64); 9] = [
    (3.0, 0.998293480350),
    (2.0, 0.989597571085),
    (1.0, 0.951421236912),
    (0.0, 0.831908066203),
    (-1.0, 0.583789895520),
    (-2.0, 0.274320197909),
    (-3.0, 0.069600118867),
    (-4.0, 0.007567678599),
    (-6.0, 0.000002707319),
];
const F4_TABLE: [(f64, f64); 8] = [
    (3.0, 0.999999999986),
    (2.0, 0.999999980362),
    (1.0, 0.999990399497),
    (0.0, 0.998574197358),
    (-1.0, 0.945646485680),
    (-2.0, 0.545275232613),
    (-3.0, 0.065359869284),
    (-4.0, 0.000502072744),
];

fn default_solution() -> PainleveSolution {
    PainleveConfig::default().solve().unwrap()
}

fn u_at(sol: &PainleveSolution, s: f64) -> f64 {
    let i = ((sol.s_max() - s) / sol.step()).round() as usize;
    assert!((sol.s_grid()[i] - s).abs() < 1e-9);
    sol.u()[i]
}

#[test]
fn airy_matches_an_independent_series() {
    // the oracle series loses digits to cancellation beyond |s| ~ 6, so the
    // comparison window stays inside that
    let mut s = -6.0;
    while s <= 4.0 {
        let got = airy_ai(s).unwrap();
        let want = common::airy_series_f64(s);
        if s >= 0.0 {
            assert!((got - want).abs() <= 1e-10 * want.abs(), "s={s}: {got} vs {want}");
        } else {
            assert!((got - want).abs() <= 1e-8, "s={s}: {got} vs {want}");
        }
        s += 0.25;
    }
}

#[test]
fn airy_matches_literature_points() {
    let ai5 = 1.083444281360744173499e-4;
    let ai10 = 1.104753255289868593355e-10;
    let aip10 = -3.520633676738923636621e-10;
    assert!((airy_ai(5.0).unwrap() - ai5).abs() < 1e-12 * ai5);
    assert!((airy_ai(10.0).unwrap() - ai10).abs() < 1e-12 * ai10);
    assert!((airy_ai_prime(10.0).unwrap() - aip10).abs() < 1e-12 * aip10.abs());
    // the tenth negative zero, well outside the series oracle's range
    let a10 = -12.82877675286575720041;
    assert!(airy_ai(a10).unwrap().abs() < 1e-8);
}

#[test]
fn airy_zeros_match_bisection_oracle() {
    let zeros = common::airy_zero_magnitudes(3);
    for (z, want) in zeros.iter().zip([2.3381074105, 4.0879494441, 5.5205598281]) {
        assert!((z - want).abs() < 1e-9, "{z} vs {want}");
    }
    for &z in &zeros {
        assert!(airy_ai(-z).unwrap().abs() < 1e-9);
    }
}

#[test]
fn connection_solution_hits_known_values() {
    let sol = default_solution();
    // machine-precision region first, then the hard left end where the
    // integrator's amplified truncation shows up
    assert!((u_at(&sol, 0.0) - 0.36706155154807843).abs() < 1e-9);
    assert!((u_at(&sol, -2.0) - 0.98339134972780534).abs() < 1e-9);
    assert!((u_at(&sol, -6.0) - 1.7310249588317787).abs() < 1e-8);
    assert!((u_at(&sol, -10.0) - 2.2357871694464073).abs() < 5e-3);
    // left asymptote sqrt(-s/2)
    assert!((u_at(&sol, -6.0) / (3.0f64).sqrt() - 1.0).abs() < 0.05);
}

#[test]
fn ode_residual_is_small_on_the_interior() {
    let sol = default_solution();
    assert!(sol.ode_residual_max() <= 1e-8, "residual {}", sol.ode_residual_max());
}

#[test]
fn step_halving_leaves_the_distribution_unchanged() {
    let a = solve_hastings_mcleod(10.0, -10.0, 5e-5).unwrap();
    let b = solve_hastings_mcleod(10.0, -10.0, 2.5e-5).unwrap();
    let mut lambda = -8.0;
    while lambda <= 4.0 {
        for beta in [TwBeta::One, TwBeta::Two, TwBeta::Four] {
            // the beta = 4 argument shift runs off the table below -5.6
            if matches!(beta, TwBeta::Four) && lambda < -5.5 {
                continue;
            }
            let fa = tw_reference(beta, lambda, &a).unwrap();
            let fb = tw_reference(beta, lambda, &b).unwrap();
            assert!((fa - fb).abs() <= 1e-6, "beta {beta:?} lambda {lambda}: {fa} vs {fb}");
        }
        lambda += 0.5;
    }
}

#[test]
fn distribution_tables_are_reproduced() {
    let sol = default_solution();
    for (l, want) in F2_TABLE {
        let got = tw_reference(TwBeta::Two, l, &sol).unwrap();
        assert!((got - want).abs() < 5e-9, "F2({l}) = {got} vs {want}");
    }
    for (l, want) in F1_TABLE {
        let got = tw_reference(TwBeta::One, l, &sol).unwrap();
        assert!((got - want).abs() < 5e-9, "F1({l}) = {got} vs {want}");
    }
    for (l, want) in F4_TABLE {
        let got = tw_reference(TwBeta::Four, l, &sol).unwrap();
        assert!((got - want).abs() < 5e-9, "F4({l}) = {got} vs {want}");
    }
}

#[test]
fn distributions_are_monotone_cdfs() {
    // no cross-beta ordering here: the three curves genuinely cross (the
    // left tail scales like exp(-beta|l|^3/24), the right one the other
    // way), so only per-curve monotonicity and range are laws
    let sol = default_solution();
    let mut prev = [0.0f64; 3];
    let mut lambda = -5.5;
    while lambda <= 8.0 {
        let f1 = tw_reference(TwBeta::One, lambda, &sol).unwrap();
        let f2 = tw_reference(TwBeta::Two, lambda, &sol).unwrap();
        let f4 = tw_reference(TwBeta::Four, lambda, &sol).unwrap();
        for (i, f) in [f1, f2, f4].iter().enumerate() {
            assert!((0.0..=1.0).contains(f));
            assert!(*f >= prev[i] - 1e-12, "beta slot {i} not monotone at {lambda}");
            prev[i] = *f;
        }
        lambda += 0.25;
    }
    assert!(prev.iter().all(|&f| f > 0.9999));
}

#[test]
fn beta4_composition_uses_half_exponents_at_the_shifted_argument() {
    // F4(l) must equal (F1 + F2/F1)/2 evaluated at l' = 2^{2/3} l; this
    // recombination is exact in the quadrature values, so the tolerance is
    // pure floating-point slack. It pins both the argument shift and the
    // half inside the cosh.
    let sol = default_solution();
    for l in [-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        let shifted = 4.0f64.cbrt() * l;
        let f1 = tw_reference(TwBeta::One, shifted, &sol).unwrap();
        let f2 = tw_reference(TwBeta::Two, shifted, &sol).unwrap();
        let f4 = tw_reference(TwBeta::Four, l, &sol).unwrap();
        let composed = 0.5 * (f1 + f2 / f1);
        assert!((f4 - composed).abs() < 1e-12, "lambda {l}: {f4} vs {composed}");
    }
}

#[test]
fn distribution_means_match_literature() {
    // E[X] = -int_{-inf}^0 F + int_0^inf (1 - F), truncated where F has
    // decayed to noise; trapezoid on a 0.01 grid
    let sol = default_solution();
    // the integrand jumps by one at zero, so each side gets its own panel
    let trapz = |beta: TwBeta, lo: f64, hi: f64, flip: bool| -> f64 {
        let n = ((hi - lo) / 0.01).round() as usize;
        let mut total = 0.0;
        for i in 0..=n {
            let l = lo + (hi - lo) * i as f64 / n as f64;
            let f = tw_reference(beta, l, &sol).unwrap();
            let g = if flip { -f } else { 1.0 - f };
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            total += w * g * (hi - lo) / n as f64;
        }
        total
    };
    let mean = |beta: TwBeta, lo: f64| trapz(beta, lo, 0.0, true) + trapz(beta, 0.0, 8.0, false);
    assert!((mean(TwBeta::Two, -9.0) + 1.7710868074).abs() < 1e-3);
    assert!((mean(TwBeta::One, -9.0) + 1.2065335746).abs() < 1e-3);
    // the beta = 4 curve only reaches down to -9/2^{2/3}; F4 there is ~1e-7
    assert!((mean(TwBeta::Four, -5.66) + 2.0552007942858106).abs() < 1e-3);
}

#[test]
fn table_files_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hm.table");
    let sol = solve_hastings_mcleod(8.0, -2.0, 1e-3).unwrap();
    sol.write_table(&path).unwrap();
    let back = PainleveSolution::read_table(&path).unwrap();
    // step is reconstructed from grid differences, so it may differ by ulps
    assert!((back.step() - sol.step()).abs() < 1e-12 * sol.step());
    assert_eq!(back.s_grid(), sol.s_grid());
    assert_eq!(back.u(), sol.u());
    // u' is rebuilt from u by finite differences on read; agreement is up
    // to that stencil's own error
    for (a, b) in back.u_prime().iter().zip(sol.u_prime()) {
        assert!((a - b).abs() < 1e-9);
    }
    for l in [-1.0, 0.0, 2.0] {
        let fa = tw_reference(TwBeta::Two, l, &sol).unwrap();
        let fb = tw_reference(TwBeta::Two, l, &back).unwrap();
        assert!((fa - fb).abs() < 1e-12);
    }
}
