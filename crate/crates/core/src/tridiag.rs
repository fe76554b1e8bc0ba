//! Symmetric tridiagonal matrices: Sturm pivot counting, bisection extraction
//! of extreme eigenvalues, and inverse-iteration eigenvectors.
//!
//! Everything here is O(n) per spectral query, which is what makes edge
//! sampling at n = 10^5..10^7 feasible. The LDL^T pivot recursion
//! `r_1 = d_1 - lambda`, `r_k = d_k - lambda - e_{k-1}^2 / r_{k-1}` yields the
//! inertia: the number of negative pivots equals the number of eigenvalues
//! below lambda. The same recursion read as a discrete flow gives
//! [`TridiagSym::riccati_count_discrete`], where each negative pivot marks a
//! blowup location of the discrete Riccati sequence.

#[derive(Debug, thiserror::Error)]
pub enum TridiagError {
    #[error("diag has length {diag}, offdiag must have length {diag} - 1, got {offdiag}")]
    LengthMismatch { diag: usize, offdiag: usize },
    #[error("matrix entries must be finite")]
    NonFiniteEntry,
    #[error("requested {k} eigenvalues from a matrix of size {n}")]
    BadCount { k: usize, n: usize },
    #[error("tolerance must be positive, got {0}")]
    BadTol(f64),
    #[error("matrix is empty")]
    Empty,
    #[error("inverse iteration did not converge: residual {residual:.3e} after {iters} iterations")]
    NoConvergence { residual: f64, iters: usize },
}

/// Which end of the spectrum `eigen_extreme` should return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Lowest,
    Highest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagSym {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagSym {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self, TridiagError> {
        if diag.is_empty() {
            return Err(TridiagError::Empty);
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(TridiagError::LengthMismatch { diag: diag.len(), offdiag: offdiag.len() });
        }
        if diag.iter().chain(offdiag.iter()).any(|x| !x.is_finite()) {
            return Err(TridiagError::NonFiniteEntry);
        }
        Ok(Self { diag, offdiag })
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    #[must_use]
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    #[must_use]
    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Row-sum (infinity) norm; the natural magnitude scale of the spectrum.
    #[must_use]
    pub fn scale(&self) -> f64 {
        let n = self.n();
        let mut s: f64 = 0.0;
        for k in 0..n {
            let mut row = self.diag[k].abs();
            if k > 0 {
                row += self.offdiag[k - 1].abs();
            }
            if k + 1 < n {
                row += self.offdiag[k].abs();
            }
            s = s.max(row);
        }
        s
    }

    fn pivot_floor(&self) -> f64 {
        // Guard scale for near-zero pivots. A pivot inside (-floor, floor) is
        // replaced by -floor, so an eigenvalue hit exactly counts as "below".
        f64::EPSILON * self.scale().max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `lambda` (ties count as below,
    /// see `pivot_floor`).
    #[must_use]
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let floor = self.pivot_floor();
        let mut count = 0usize;
        let mut prev = 1.0f64; // unused on the first row
        for k in 0..self.n() {
            let mut r = self.diag[k] - lambda;
            if k > 0 {
                let e = self.offdiag[k - 1];
                r -= e * e / prev;
            }
            if r.abs() < floor {
                r = -floor;
            }
            if r < 0.0 {
                count += 1;
            }
            prev = r;
        }
        count
    }

    /// Same pivot recursion, read as the discrete Riccati flow: returns the
    /// blowup count together with the 0-based rows where the pivot went
    /// negative. The count always equals [`TridiagSym::sturm_count`].
    #[must_use]
    pub fn riccati_count_discrete(&self, lambda: f64) -> (usize, Vec<usize>) {
        let floor = self.pivot_floor();
        let mut positions = Vec::new();
        let mut prev = 1.0f64;
        for k in 0..self.n() {
            let mut r = self.diag[k] - lambda;
            if k > 0 {
                let e = self.offdiag[k - 1];
                r -= e * e / prev;
            }
            if r.abs() < floor {
                r = -floor;
            }
            if r < 0.0 {
                positions.push(k);
            }
            prev = r;
        }
        (positions.len(), positions)
    }

    /// Gershgorin interval (lo, hi) containing the whole spectrum.
    #[must_use]
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..n {
            let mut r = 0.0;
            if k > 0 {
                r += self.offdiag[k - 1].abs();
            }
            if k + 1 < n {
                r += self.offdiag[k].abs();
            }
            lo = lo.min(self.diag[k] - r);
            hi = hi.max(self.diag[k] + r);
        }
        (lo, hi)
    }

    /// Bisection bracket width at which further refinement is pointless.
    fn stop_width(&self, tol: f64, lo: f64, hi: f64) -> f64 {
        let scale = self.scale();
        tol.max(1e-12 * scale).max(1e-12 * (lo.abs() + hi.abs()))
    }

    /// The smallest x with `sturm_count(x) >= j`, bracketed to the stop width.
    fn kth_by_bisection(&self, j: usize, tol: f64) -> f64 {
        let (glo, ghi) = self.gershgorin();
        let pad = 1e-6 * self.scale() + 1e-12;
        let mut lo = glo - pad;
        let mut hi = ghi + pad;
        for _ in 0..256 {
            if hi - lo <= self.stop_width(tol, lo, hi) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.sturm_count(mid) >= j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The k lowest or highest eigenvalues, ascending, each bracketed to width
    /// <= max(tol, rounding floor).
    pub fn eigen_extreme(&self, k: usize, which: Which, tol: f64) -> Result<Vec<f64>, TridiagError> {
        let n = self.n();
        if k == 0 || k > n {
            return Err(TridiagError::BadCount { k, n });
        }
        if !(tol > 0.0) {
            return Err(TridiagError::BadTol(tol));
        }
        let js: Vec<usize> = match which {
            Which::Lowest => (1..=k).collect(),
            Which::Highest => (n - k + 1..=n).collect(),
        };
        Ok(js.into_iter().map(|j| self.kth_by_bisection(j, tol)).collect())
    }

    #[must_use]
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(v.len(), n);
        let mut out = vec![0.0; n];
        for k in 0..n {
            let mut s = self.diag[k] * v[k];
            if k > 0 {
                s += self.offdiag[k - 1] * v[k - 1];
            }
            if k + 1 < n {
                s += self.offdiag[k] * v[k + 1];
            }
            out[k] = s;
        }
        out
    }

    /// Unit eigenvector for an isolated eigenvalue known to within `tol`, by
    /// inverse iteration. Convergence is declared when
    /// `||T v - lambda v|| <= 10 * tol * scale`. The sign is normalized so the
    /// largest-magnitude component is positive.
    pub fn eigenvector(&self, lambda: f64, tol: f64, max_iter: usize) -> Result<Vec<f64>, TridiagError> {
        if !(tol > 0.0) {
            return Err(TridiagError::BadTol(tol));
        }
        let n = self.n();
        let thresh = 10.0 * tol * self.scale().max(f64::MIN_POSITIVE);
        // deterministic pseudo-random start; ones can be orthogonal to the target
        let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (n as u64);
        let mut v: Vec<f64> = (0..n)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        normalize(&mut v);
        let mut residual = f64::INFINITY;
        for iters in 0..max_iter.max(1) {
            let mut w = self.solve_shifted(lambda, &v);
            normalize(&mut w);
            let tv = self.matvec(&w);
            residual = tv
                .iter()
                .zip(&w)
                .map(|(a, b)| (a - lambda * b) * (a - lambda * b))
                .sum::<f64>()
                .sqrt();
            v = w;
            if residual <= thresh {
                fix_sign(&mut v);
                return Ok(v);
            }
            let _ = iters;
        }
        Err(TridiagError::NoConvergence { residual, iters: max_iter })
    }

    /// Solve (T - lambda I) x = rhs by LU with partial pivoting. Near-zero
    /// pivots are nudged away from zero, which is exactly what inverse
    /// iteration wants.
    fn solve_shifted(&self, lambda: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.n();
        let guard = f64::EPSILON * self.scale().max(f64::MIN_POSITIVE);
        let nudge = |x: f64| {
            if x.abs() >= guard {
                x
            } else if x < 0.0 {
                -guard
            } else {
                guard
            }
        };
        let sub: Vec<f64> = self.offdiag.clone(); // sub[i] couples rows i, i+1
        let mut main: Vec<f64> = self.diag.iter().map(|d| d - lambda).collect();
        let mut sup: Vec<f64> = self.offdiag.clone();
        let mut sup2 = vec![0.0; n]; // fill-in from row swaps
        let mut x: Vec<f64> = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if main[i].abs() >= sub[i].abs() {
                let m = sub[i] / nudge(main[i]);
                main[i + 1] -= m * sup[i];
                x[i + 1] -= m * x[i];
            } else {
                // swap rows i and i+1; row i picks up a second superdiagonal
                let m = main[i] / sub[i];
                main[i] = sub[i];
                let t = main[i + 1];
                main[i + 1] = sup[i] - m * t;
                sup[i] = t;
                if i + 1 < n - 1 {
                    sup2[i] = sup[i + 1];
                    sup[i + 1] = -m * sup[i + 1];
                }
                x.swap(i, i + 1);
                let xi = x[i];
                x[i + 1] -= m * xi;
            }
        }
        // back substitution
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s -= sup[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= sup2[i] * x[i + 2];
            }
            x[i] = s / nudge(main[i]);
        }
        x
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 && norm.is_finite() {
        for x in v.iter_mut() {
            *x /= norm;
        }
    } else {
        // renormalize through the largest entry first to dodge overflow
        let big = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
        for x in v.iter_mut() {
            *x /= big;
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

fn fix_sign(v: &mut [f64]) {
    let mut imax = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[imax].abs() {
            imax = i;
        }
    }
    if v[imax] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}
