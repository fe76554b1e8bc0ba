//! Airy function Ai and its derivative on [-15, 15].
//!
//! Below the switch point the Maclaurin pair f, g is summed in double-double:
//! the alternating terms peak near e^{(2/3)|s|^{3/2}} (about 7e16 at s = -15)
//! before cancelling down to an O(1) result, so f64 terms alone would lose
//! every digit past |s| ~ 8. Above the switch the standard exponentially
//! damped asymptotic expansion is already accurate to ~8e-14 relative at
//! s = 8 and under 1e-15 by s = 10.

use super::dd::Dd;

pub(crate) const S_SWITCH: f64 = 8.0;

// Ai(0) = 3^{-2/3}/Gamma(2/3) and -Ai'(0) = 3^{-1/3}/Gamma(1/3),
// split to double-double (residuals ~1e-34).
const AI0: Dd = Dd { hi: 0.3550280538878172, lo: 2.05233632436212e-17 };
const NEG_AIP0: Dd = Dd { hi: 0.2588194037928068, lo: -2.522243111610832e-17 };

/// (Ai, Ai') by the double-double Maclaurin series. Valid on |x| <= 15;
/// interior accuracy ~1e-15 relative (positive side) / absolute (negative).
pub(crate) fn eval_series(x: f64) -> (f64, f64) {
    let x3 = Dd::sqr_f64(x).mul_f64(x);
    // f = sum t_k x^{3k}, g = sum u_k x^{3k+1}, and their derivatives
    let mut t = Dd::from_f64(1.0);
    let mut u = Dd::from_f64(x);
    let mut big_t = Dd::sqr_f64(x).div_f64(2.0); // first nonzero f' term (k=1)
    let mut v = Dd::from_f64(1.0);
    let mut f = t;
    let mut g = u;
    let mut fp = Dd::ZERO;
    let mut gp = v;
    let mut maxmag: f64 = 1.0;
    for k in 0..300usize {
        let kf = k as f64;
        t = t.mul(x3).div_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        u = u.mul(x3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        v = v.mul(x3).div_f64((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        if k >= 1 {
            big_t = big_t
                .mul(x3)
                .mul_f64(kf + 1.0)
                .div_f64(kf * (3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        }
        f = f.add(t);
        g = g.add(u);
        fp = fp.add(big_t);
        gp = gp.add(v);
        maxmag = maxmag.max(t.abs()).max(u.abs()).max(big_t.abs()).max(v.abs());
        let thresh = 1e-36 * maxmag;
        if t.abs() < thresh && u.abs() < thresh && big_t.abs() < thresh && v.abs() < thresh {
            break;
        }
    }
    let ai = AI0.mul(f).sub(NEG_AIP0.mul(g));
    let aip = AI0.mul(fp).sub(NEG_AIP0.mul(gp));
    (ai.to_f64(), aip.to_f64())
}

// pi to double-double, for the asymptotic prefactor
const PI_DD: Dd = Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 };

/// Square root of a positive double-double by one Newton refinement of the
/// f64 root; error ~1 ulp of lo.
fn sqrt_dd(a: Dd) -> Dd {
    let r = a.hi.sqrt();
    let corr = a.sub(Dd::sqr_f64(r)).div_f64(2.0 * r);
    Dd::from_f64(r).add(corr)
}

/// (Ai, Ai') by the large-argument expansion, truncated at the smallest
/// term, with the sums and prefactor carried in double-double.
///
/// The one f64-bound operation left is exp(-zeta.hi), so relative accuracy
/// bottoms out near 1 ulp (~1.1e-16) rather than at the expansion's own
/// floor e^{-2 zeta}. That matters downstream: the Painleve solver's left
/// end amplifies any relative error in this seed by ~9e12, so every spare
/// digit here is two digits of headroom there.
pub(crate) fn eval_asymptotic_dd(x: f64) -> (Dd, Dd) {
    let rx = sqrt_dd(Dd::from_f64(x));
    let zeta = rx.mul_f64(x).mul_f64(2.0).div_f64(3.0);
    let x4 = sqrt_dd(rx);
    // exp(-zeta) = exp(-hi) * exp(-lo), the second factor to first order
    let pref = Dd::from_f64((-zeta.hi).exp())
        .mul(Dd::from_f64(1.0).sub(Dd::from_f64(zeta.lo)))
        .div(sqrt_dd(PI_DD).mul_f64(2.0));
    let mut term = Dd::from_f64(1.0); // (-1)^k u_k / zeta^k
    let mut s_ai = term;
    let mut s_aip = term;
    let mut prev = f64::INFINITY;
    for k in 1..60usize {
        let kf = k as f64;
        // integer factors stay below 2^53, so the f64 products are exact
        term = term
            .mul_f64(-(6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0))
            .div_f64((2.0 * kf - 1.0) * 216.0 * kf)
            .div(zeta);
        if term.abs() >= prev {
            break; // divergent tail reached; stop at the smallest term
        }
        s_ai = s_ai.add(term);
        s_aip = s_aip.add(term.mul_f64(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0)));
        prev = term.abs();
        if term.abs() < 1e-34 * s_ai.abs() {
            break;
        }
    }
    (pref.div(x4).mul(s_ai), pref.mul(x4).mul(s_aip).neg())
}

pub(crate) fn eval_asymptotic(x: f64) -> (f64, f64) {
    let (ai, aip) = eval_asymptotic_dd(x);
    (ai.to_f64(), aip.to_f64())
}

pub(crate) fn eval(s: f64) -> (f64, f64) {
    if s >= S_SWITCH {
        eval_asymptotic(s)
    } else {
        eval_series(s)
    }
}
