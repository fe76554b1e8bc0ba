//! Finite-difference model of the random operator -d²/dx² + x + noise on
//! [0, x_max] with zero boundary values, and its low-lying spectrum.
//!
//! White noise lives on the grid as one standard normal per cell; the
//! Brownian increment over cell k is sqrt(h)·g_k. The operator matrix puts
//! the whole potential (linear drift plus the cell-averaged noise) on the
//! diagonal of the standard second-difference stencil.

use crate::randkit::RngStream;
use crate::tridiag::{TridiagError, TridiagSym, Which};

#[derive(Debug, thiserror::Error)]
pub enum AiryOpError {
    #[error("grid step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("x_max = {x_max} must cover at least one cell of width {h}")]
    BadExtent { x_max: f64, h: f64 },
    #[error("beta must be positive, got {0}")]
    BadBeta(f64),
    #[error("requested k = {k} eigenvalues from a grid of {n} cells")]
    BadCount { k: usize, n: usize },
    #[error("rayleigh quotient of the zero vector")]
    ZeroVector,
    #[error("vector length {len} does not match matrix size {n}")]
    LengthMismatch { n: usize, len: usize },
    #[error("eigenvalue {lambda:.4} too close to the cutoff {x_max}; enlarging the box did not help")]
    TruncationSuspect { lambda: f64, x_max: f64 },
    #[error(transparent)]
    Tridiag(#[from] TridiagError),
}

/// A realization of the driving noise: cells of width `h` covering
/// [0, n·h] with n = floor(x_max/h), one standard normal per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseGrid {
    h: f64,
    x_max: f64,
    g: Vec<f64>,
}

// Cell counts within one part in 10^12 of an integer round to it, so that
// x_max/h ratios like 15/0.01 land on the intended whole number.
fn cell_count(x_max: f64, h: f64) -> usize {
    let ratio = x_max / h;
    (ratio + 1e-12 * ratio.max(1.0)).floor() as usize
}

impl NoiseGrid {
    pub fn sample(h: f64, x_max: f64, stream: &mut RngStream) -> Result<Self, AiryOpError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(AiryOpError::BadStep(h));
        }
        let n = if x_max.is_finite() { cell_count(x_max, h) } else { 0 };
        if n == 0 {
            return Err(AiryOpError::BadExtent { x_max, h });
        }
        let g = (0..n).map(|_| stream.standard_normal()).collect();
        Ok(NoiseGrid { h, x_max, g })
    }

    #[must_use]
    pub fn h(&self) -> f64 {
        self.h
    }

    #[must_use]
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.g.len()
    }

    /// One standard normal per cell, in order from the origin outward.
    #[must_use]
    pub fn g(&self) -> &[f64] {
        &self.g
    }

    /// Extend the same noise path out to `new_x_max`, drawing only the
    /// appended cells. The existing realization is kept bit for bit, so the
    /// enlarged operator sees the identical noise on the original window.
    pub fn extended(&self, new_x_max: f64, stream: &mut RngStream) -> Result<Self, AiryOpError> {
        if !new_x_max.is_finite() || new_x_max < self.x_max {
            return Err(AiryOpError::BadExtent { x_max: new_x_max, h: self.h });
        }
        let n_new = cell_count(new_x_max, self.h).max(self.n());
        let mut g = self.g.clone();
        g.extend((g.len()..n_new).map(|_| stream.standard_normal()));
        Ok(NoiseGrid { h: self.h, x_max: new_x_max, g })
    }

    #[cfg(test)]
    fn from_parts(h: f64, g: Vec<f64>) -> Self {
        let x_max = h * g.len() as f64;
        NoiseGrid { h, x_max, g }
    }
}

/// Assemble the operator matrix for the given noise realization:
/// second-difference Laplacian (2/h² on, -1/h² off the diagonal) plus the
/// potential sampled at the cell's right endpoint x_k = k·h plus the noise
/// cell average (2/sqrt(beta))·g_k/sqrt(h). Zero boundary values at both
/// ends; beta = +inf turns the noise off exactly.
#[must_use]
pub fn build_sao(beta: f64, grid: &NoiseGrid) -> TridiagSym {
    assert!(beta > 0.0, "beta must be positive");
    let h = grid.h();
    let inv_h2 = 1.0 / (h * h);
    let noise_amp = (2.0 / beta.sqrt()) / h.sqrt();
    let diag: Vec<f64> = grid
        .g()
        .iter()
        .enumerate()
        .map(|(i, &gk)| 2.0 * inv_h2 + (i + 1) as f64 * h + noise_amp * gk)
        .collect();
    let offdiag = vec![-inv_h2; grid.n().saturating_sub(1)];
    TridiagSym::new(diag, offdiag).expect("grid entries are finite")
}

// Bisection width for operator eigenvalues; discretization error is orders
// of magnitude larger at any usable h.
const SAO_EIG_TOL: f64 = 1e-8;

// Eigenvalues within 5 of the cutoff are truncation-suspect; the box is
// enlarged by half up to this many times before giving up.
const MAX_ENLARGE: usize = 3;

/// Draw one noise path and return the k lowest eigenvalues, ascending.
///
/// If the top requested eigenvalue lands within 5 of x_max the Dirichlet
/// wall may be distorting it, so the same path is extended to 1.5·x_max and
/// the spectrum recomputed, up to three times.
pub fn sao_eigs(
    beta: f64,
    h: f64,
    x_max: f64,
    k: usize,
    stream: &mut RngStream,
) -> Result<Vec<f64>, AiryOpError> {
    if !(beta > 0.0) {
        return Err(AiryOpError::BadBeta(beta));
    }
    let mut grid = NoiseGrid::sample(h, x_max, stream)?;
    if k == 0 || k > grid.n() {
        return Err(AiryOpError::BadCount { k, n: grid.n() });
    }
    let mut last = f64::NAN;
    for round in 0..=MAX_ENLARGE {
        let t = build_sao(beta, &grid);
        let eigs = t.eigen_extreme(k, Which::Lowest, SAO_EIG_TOL)?;
        last = eigs[k - 1];
        if last <= grid.x_max() - 5.0 {
            return Ok(eigs);
        }
        if round < MAX_ENLARGE {
            grid = grid.extended(1.5 * grid.x_max(), stream)?;
        }
    }
    Err(AiryOpError::TruncationSuspect { lambda: last, x_max: grid.x_max() })
}

/// Discrete Rayleigh quotient <v, Tv>/<v, v>. Equals the eigenvalue on an
/// eigenpair and upper-bounds the lowest eigenvalue for every nonzero v
/// (the grid weight h cancels between numerator and denominator).
pub fn rayleigh(t: &TridiagSym, v: &[f64], h: f64) -> Result<f64, AiryOpError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(AiryOpError::BadStep(h));
    }
    if v.len() != t.n() {
        return Err(AiryOpError::LengthMismatch { n: t.n(), len: v.len() });
    }
    let tv = t.matvec(v);
    let num: f64 = v.iter().zip(&tv).map(|(a, b)| a * b).sum();
    let den: f64 = v.iter().map(|a| a * a).sum();
    if den == 0.0 {
        return Err(AiryOpError::ZeroVector);
    }
    Ok(num / den)
}

/// Halve the grid step, splitting each Brownian increment into two
/// conditionally-correct halves: with z a fresh standard normal, cell k
/// becomes cells ((g_k + z)/sqrt(2), (g_k - z)/sqrt(2)), whose increments
/// sum back to the original sqrt(h)·g_k. Refining and coarse grids thus
/// carry the same noise path at two resolutions, which is what makes
/// step-halving comparisons of eigenvalues meaningful pathwise.
///
/// The refined extent is the covered extent n·h, so cell counts stay exact.
pub fn couple_refine(grid: &NoiseGrid, stream: &mut RngStream) -> NoiseGrid {
    let mut fine = Vec::with_capacity(2 * grid.n());
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for &gk in grid.g() {
        let z = stream.standard_normal();
        fine.push((gk + z) * half);
        fine.push((gk - z) * half);
    }
    let h2 = 0.5 * grid.h();
    let x_max = grid.h() * grid.n() as f64;
    NoiseGrid { h: h2, x_max, g: fine }
}
