//! Minimal double-double arithmetic (~31 significant digits) for the Airy
//! Maclaurin series, whose alternating terms cancel down by a factor of up to
//! e^{(2/3)|s|^{3/2}} before settling; plain f64 keeps too few digits past
//! |s| ~ 4.
//!
//! Only the operations the series needs. Error terms follow Dekker/Knuth
//! two-sum and FMA-based two-product.

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[cfg(test)]
    pub fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s1, e1) = two_sum(self.hi, other.hi);
        let (s2, e2) = two_sum(self.lo, other.lo);
        let (s1, e1) = quick_two_sum(s1, e1 + s2);
        let (hi, lo) = quick_two_sum(s1, e1 + e2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        let q = self.hi / b;
        let (p, e) = two_prod(q, b);
        let r = ((self.hi - p) - e + self.lo) / b;
        let (hi, lo) = quick_two_sum(q, r);
        Dd { hi, lo }
    }

    /// Full double-double quotient: two rounds of quotient refinement keep
    /// the error near 1 ulp of lo.
    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q0 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q0));
        let q1 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let (s, e) = quick_two_sum(q0, q1);
        let (hi, lo) = quick_two_sum(s, e + q2);
        Dd { hi, lo }
    }

    /// Double-double square of a plain f64.
    #[inline]
    pub fn sqr_f64(x: f64) -> Dd {
        let (p, e) = two_prod(x, x);
        Dd { hi: p, lo: e }
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.to_f64().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_tracks_roundoff() {
        let a = Dd::from_f64(1.0);
        let b = Dd::from_f64(1e-20);
        let s = a.add(b);
        assert_eq!(s.hi, 1.0);
        assert_eq!(s.lo, 1e-20);
    }

    #[test]
    fn mul_exact_split() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60; the 2^-60 tail lands in lo
        let x = 1.0 + (2.0f64).powi(-30);
        let p = Dd::sqr_f64(x);
        assert_eq!(p.hi, x * x);
        let expect_lo = (2.0f64).powi(-60);
        assert_eq!(p.lo, expect_lo);
    }

    #[test]
    fn cancellation_survives() {
        // (1e8 + 1) - 1e8 - 1 == 0 in dd, garbage-free
        let a = Dd::from_f64(1e8).add(Dd::from_f64(1.0));
        let z = a.sub(Dd::from_f64(1e8)).sub(Dd::from_f64(1.0));
        assert_eq!(z.to_f64(), 0.0);
    }

    #[test]
    fn div_roundtrip() {
        let a = Dd::new(std::f64::consts::PI, 1.2246467991473532e-16);
        let b = a.div_f64(7.0).mul_f64(7.0);
        assert!((b.hi - a.hi).abs() < 1e-15);
        assert!((b.sub(a)).abs() < 1e-30);
    }

    #[test]
    fn div_dd_roundtrip() {
        let a = Dd::new(std::f64::consts::PI, 1.2246467991473532e-16);
        let b = Dd::from_f64(1.0).add(Dd::new(0.0, 3.1e-17));
        let q = a.div(b);
        assert!((q.mul(b).sub(a)).abs() < 1e-30);
        // dividing by 1 + tiny must actually shift lo
        assert!((q.to_f64() - a.to_f64()).abs() < 1e-15);
        assert!((q.lo - a.lo).abs() > 1e-18);
    }
}
